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

#include "gpbec/fock_basis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gpbec/errors.hpp"

namespace gpbec {

int FockBasis::particle_number(std::size_t i) const {
  const auto s = state(i);
  return std::accumulate(s.begin(), s.end(), 0);
}

std::optional<std::size_t> FockBasis::index_of(std::span<const std::uint8_t> occ) const {
  if (occ.size() != modes_) return std::nullopt;
  auto it = lookup_.find(std::string_view(reinterpret_cast<const char*>(occ.data()), occ.size()));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

LatticeVector FockBasis::mode_momentum(std::size_t mode) const {
  return mode == 0 ? LatticeVector{} : (*momenta_)[mode - 1];
}

long FockBasis::mode_of(const LatticeVector& p) const {
  if (p.is_zero()) return 0;
  auto idx = momenta_->index_of(p);
  return idx ? long(*idx) + 1 : -1;
}

std::optional<std::size_t> FockBasis::condensate_index(int n) const {
  if (n < 0 || n > 255) return std::nullopt;
  std::vector<std::uint8_t> occ(modes_, 0);
  occ[0] = std::uint8_t(n);
  return index_of(occ);
}

namespace {

struct Enumerator {
  const std::vector<LatticeVector>& mom;  // per mode
  std::optional<LatticeVector> target;
  std::size_t cap;
  std::vector<int> reach;  // max |coordinate| over modes >= m
  std::vector<std::uint8_t> occ;
  std::vector<std::uint8_t>& out;
  std::size_t count = 0;

  void run(std::size_t mode, int left, LatticeVector acc) {
    const std::size_t M = mom.size();
    if (target) {
      const LatticeVector d = *target - acc;
      const long lim = long(left) * reach[mode];
      if (std::abs(d.x) > lim || std::abs(d.y) > lim || std::abs(d.z) > lim) return;
    }
    if (mode + 1 == M) {
      const LatticeVector fin = acc + mom[mode] * left;
      if (target && fin != *target) return;
      occ[mode] = std::uint8_t(left);
      if (++count > cap)
        throw DimensionOverflow("Fock basis exceeds the dimension cap of " + std::to_string(cap), cap);
      out.insert(out.end(), occ.begin(), occ.end());
      occ[mode] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      occ[mode] = std::uint8_t(k);
      run(mode + 1, left - k, acc + mom[mode] * k);
    }
    occ[mode] = 0;
  }
};

}  // namespace

FockBasis enumerate_basis_range(std::shared_ptr<const MomentumSet> momenta, int n_min, int n_max,
                                std::optional<LatticeVector> total_momentum, std::size_t dim_cap) {
  if (!momenta) throw std::invalid_argument("momentum set is null");
  if (n_min < 0 || n_max < n_min) throw std::invalid_argument("need 0 <= n_min <= n_max");
  if (n_max > 255) throw std::invalid_argument("particle numbers above 255 are not supported");

  FockBasis basis;
  basis.momenta_ = std::move(momenta);
  basis.modes_ = basis.momenta_->size() + 1;
  basis.n_min_ = n_min;
  basis.n_max_ = n_max;
  basis.total_momentum_ = total_momentum;

  std::vector<LatticeVector> mom(basis.modes_);
  for (std::size_t m = 1; m < basis.modes_; ++m) mom[m] = (*basis.momenta_)[m - 1];
  std::vector<int> reach(basis.modes_ + 1, 0);
  for (std::size_t m = basis.modes_; m-- > 0;)
    reach[m] = std::max({reach[m + 1], std::abs(mom[m].x), std::abs(mom[m].y), std::abs(mom[m].z)});

  Enumerator e{mom, total_momentum, dim_cap, reach, std::vector<std::uint8_t>(basis.modes_, 0),
               basis.occupations_};
  for (int n = n_min; n <= n_max; ++n) e.run(0, n, LatticeVector{});

  basis.dim_ = e.count;
  basis.lookup_.reserve(basis.dim_);
  const char* base = reinterpret_cast<const char*>(basis.occupations_.data());
  for (std::size_t i = 0; i < basis.dim_; ++i)
    basis.lookup_.emplace(std::string_view(base + i * basis.modes_, basis.modes_), i);
  return basis;
}

FockBasis enumerate_basis(std::shared_ptr<const MomentumSet> momenta, int n,
                          std::optional<LatticeVector> total_momentum, std::size_t dim_cap) {
  return enumerate_basis_range(std::move(momenta), n, n, total_momentum, dim_cap);
}

}  // namespace gpbec
