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

#ifndef GPBEC_MOMENTUM_SET_HPP
#define GPBEC_MOMENTUM_SET_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpbec/potential.hpp"

namespace gpbec {

/// Point of the momentum lattice 2 pi Z^3, stored by its integer coordinates.
struct LatticeVector {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr LatticeVector operator+(const LatticeVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr LatticeVector operator-(const LatticeVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr LatticeVector operator-() const { return {-x, -y, -z}; }
  constexpr LatticeVector operator*(int s) const { return {s * x, s * y, s * z}; }
  constexpr auto operator<=>(const LatticeVector&) const = default;

  constexpr bool is_zero() const { return x == 0 && y == 0 && z == 0; }
  constexpr long norm2_int() const { return long(x) * x + long(y) * y + long(z) * z; }
  /// |p|^2 in physical units, (2 pi)^2 (x^2 + y^2 + z^2).
  double momentum_norm2() const { return kTwoPi * kTwoPi * double(norm2_int()); }
  Vec3 momentum() const { return {kTwoPi * x, kTwoPi * y, kTwoPi * z}; }
};

std::string to_string(const LatticeVector& p);

/// The nonzero lattice momenta 0 < |p| <= cutoff, in lexicographic order of
/// their integer coordinates. Closed under p -> -p and under reflection of
/// each coordinate.
class MomentumSet {
 public:
  MomentumSet() = default;

  double cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<LatticeVector>& points() const noexcept { return points_; }
  const LatticeVector& operator[](std::size_t i) const { return points_[i]; }

  /// Largest |coordinate| over the set (0 for the empty set).
  int extent() const noexcept { return extent_; }

  std::optional<std::size_t> index_of(const LatticeVector& p) const;
  bool contains(const LatticeVector& p) const { return index_of(p).has_value(); }
  /// Index of -points()[i].
  std::size_t negated(std::size_t i) const { return negated_[i]; }

  friend bool operator==(const MomentumSet& a, const MomentumSet& b) {
    return a.points_ == b.points_;
  }

 private:
  friend MomentumSet build_momentum_set(double, std::vector<std::string>*);
  friend MomentumSet momentum_set_from_points(std::vector<LatticeVector>);
  void index_points();

  double cutoff_ = 0.0;
  int extent_ = 0;
  std::vector<LatticeVector> points_;
  std::vector<std::size_t> negated_;
  std::vector<std::int32_t> cube_;  // dense (2 extent + 1)^3 lookup, -1 = absent
};

/// Builds the momentum set for the given cutoff (physical units). A cutoff
/// below 2 pi yields the empty set; a warning is appended to `warnings`, or
/// written to stderr when `warnings` is null.
MomentumSet build_momentum_set(double cutoff, std::vector<std::string>* warnings = nullptr);

/// Arbitrary finite set of nonzero lattice points, sorted lexicographically;
/// the cutoff is the largest |p|. Throws std::invalid_argument unless the set
/// is nonempty, duplicate-free, excludes 0 and is closed under p -> -p.
MomentumSet momentum_set_from_points(std::vector<LatticeVector> points);

}  // namespace gpbec

#endif  // GPBEC_MOMENTUM_SET_HPP
