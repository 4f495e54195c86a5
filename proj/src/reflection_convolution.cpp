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

#include "reflection_convolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "kernel_table.hpp"

namespace gpbec::detail {

ReflectionConvolution::ReflectionConvolution(const PotentialSpec& v, int N, const MomentumSet& set)
    : extent_(set.extent()), n_(2 * set.extent() + 1) {
  if (set.empty()) throw std::invalid_argument("convolution over an empty momentum set");

  const int e = extent_;
  const std::size_t side = std::size_t(e + 1);
  octant_lookup_.assign(side * side * side, -1);
  for (const auto& p : set.points()) {
    if (p.x < 0 || p.y < 0 || p.z < 0) continue;
    octant_lookup_[(std::size_t(p.x) * side + std::size_t(p.y)) * side + std::size_t(p.z)] =
        std::int32_t(points_.size());
    points_.push_back(p);
    const int nonzero = int(p.x != 0) + int(p.y != 0) + int(p.z != 0);
    weights_.push_back(double(1 << nonzero));
    grid_index_.push_back(flat(p.x, p.y, p.z));
  }
  // Every point must have its octant image; sets built from a cutoff always do.
  for (const auto& p : set.points()) {
    const LatticeVector a{std::abs(p.x), std::abs(p.y), std::abs(p.z)};
    if (!set.contains(a)) throw std::invalid_argument("momentum set is not reflection symmetric");
  }

  const std::size_t total = std::size_t(n_) * std::size_t(n_) * std::size_t(n_);
  spectrum_ = fftw_array<double>(total);
  work_ = fftw_array<double>(total);

  const int two_e = 2 * e;
  const KernelTable table(v, N, 3L * two_e * two_e);
  abs_sum_ = 0.0;
  for (int i = 0; i <= two_e; ++i) {
    for (int j = 0; j <= two_e; ++j) {
      for (int k = 0; k <= two_e; ++k) {
        const double g = table(long(i) * i + long(j) * j + long(k) * k);
        spectrum_[flat(i, j, k)] = g;
        const int nonzero = int(i != 0) + int(j != 0) + int(k != 0);
        abs_sum_ += double(1 << nonzero) * std::abs(g);
      }
    }
  }

  {
    FftwPlan kernel_plan(fftw_plan_r2r_3d(n_, n_, n_, spectrum_.get(), spectrum_.get(), FFTW_REDFT00,
                                          FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE));
    kernel_plan.execute();
  }
  // DCT-I applied twice multiplies by the period P = 2 (n - 1) per axis.
  const double period = double(2 * (n_ - 1));
  const double scale = 1.0 / (period * period * period);
  for (std::size_t i = 0; i < total; ++i) spectrum_[i] *= scale;

  plan_ = FftwPlan(fftw_plan_r2r_3d(n_, n_, n_, work_.get(), work_.get(), FFTW_REDFT00, FFTW_REDFT00,
                                    FFTW_REDFT00, FFTW_ESTIMATE));
}

std::size_t ReflectionConvolution::octant_index(const LatticeVector& p) const {
  const LatticeVector a{std::abs(p.x), std::abs(p.y), std::abs(p.z)};
  const std::size_t side = std::size_t(extent_ + 1);
  if (a.x > extent_ || a.y > extent_ || a.z > extent_)
    throw std::out_of_range("lattice vector outside the convolution grid");
  const auto idx = octant_lookup_[(std::size_t(a.x) * side + std::size_t(a.y)) * side + std::size_t(a.z)];
  if (idx < 0) throw std::out_of_range("lattice vector not in the momentum set");
  return std::size_t(idx);
}

void ReflectionConvolution::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t total = std::size_t(n_) * std::size_t(n_) * std::size_t(n_);
  std::fill(work_.get(), work_.get() + total, 0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) work_[grid_index_[i]] = x[i];
  plan_.execute();
  for (std::size_t i = 0; i < total; ++i) work_[i] *= spectrum_[i];
  plan_.execute();
  for (std::size_t i = 0; i < points_.size(); ++i) y[i] = work_[grid_index_[i]];
}

}  // namespace gpbec::detail
