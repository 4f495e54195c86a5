// Copyright 2026 The gpbec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPBEC_FOCK_BASIS_HPP
#define GPBEC_FOCK_BASIS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gpbec/momentum_set.hpp"

namespace gpbec {

inline constexpr std::size_t kDefaultDimCap = 2'000'000;

/// Occupation-number basis over the modes {0} U momenta. Mode 0 is the zero
/// momentum mode, mode i + 1 is momenta[i]. States hold the particle numbers
/// in [n_min, n_max] and, if a total momentum is fixed, sum_p p nu_p = P.
///
/// Within each particle number the states are in descending lexicographic
/// order of their occupation vectors, so the pure condensate (n; 0, ..., 0)
/// comes first.
class FockBasis {
 public:
  FockBasis(FockBasis&&) noexcept = default;
  FockBasis& operator=(FockBasis&&) noexcept = default;
  // The lookup table views into the occupation storage.
  FockBasis(const FockBasis&) = delete;
  FockBasis& operator=(const FockBasis&) = delete;

  const std::shared_ptr<const MomentumSet>& momenta() const noexcept { return momenta_; }
  std::size_t num_modes() const noexcept { return modes_; }
  std::size_t dim() const noexcept { return dim_; }
  int n_min() const noexcept { return n_min_; }
  int n_max() const noexcept { return n_max_; }
  /// Empty when the basis spans all total momenta.
  const std::optional<LatticeVector>& total_momentum() const noexcept { return total_momentum_; }

  std::span<const std::uint8_t> state(std::size_t i) const {
    return {occupations_.data() + i * modes_, modes_};
  }
  int occupation(std::size_t i, std::size_t mode) const { return occupations_[i * modes_ + mode]; }
  int particle_number(std::size_t i) const;
  int excited_number(std::size_t i) const { return particle_number(i) - occupation(i, 0); }

  std::optional<std::size_t> index_of(std::span<const std::uint8_t> occ) const;

  /// Lattice momentum of a mode (zero for mode 0).
  LatticeVector mode_momentum(std::size_t mode) const;
  /// Mode of a lattice momentum, or -1 when it lies outside {0} U momenta.
  long mode_of(const LatticeVector& p) const;

  /// Index of the pure condensate state with n particles, if present.
  std::optional<std::size_t> condensate_index(int n) const;

 private:
  FockBasis() = default;
  friend FockBasis enumerate_basis_range(std::shared_ptr<const MomentumSet>, int, int,
                                         std::optional<LatticeVector>, std::size_t);

  std::shared_ptr<const MomentumSet> momenta_;
  std::size_t modes_ = 0;
  std::size_t dim_ = 0;
  int n_min_ = 0;
  int n_max_ = 0;
  std::optional<LatticeVector> total_momentum_;
  std::vector<std::uint8_t> occupations_;
  std::unordered_map<std::string_view, std::size_t> lookup_;
};

/// Sector with exactly n particles. Throws DimensionOverflow past dim_cap.
FockBasis enumerate_basis(std::shared_ptr<const MomentumSet> momenta, int n,
                          std::optional<LatticeVector> total_momentum = LatticeVector{},
                          std::size_t dim_cap = kDefaultDimCap);

/// Union of the sectors n_min..n_max.
FockBasis enumerate_basis_range(std::shared_ptr<const MomentumSet> momenta, int n_min, int n_max,
                                std::optional<LatticeVector> total_momentum = LatticeVector{},
                                std::size_t dim_cap = kDefaultDimCap);

}  // namespace gpbec

#endif  // GPBEC_FOCK_BASIS_HPP
