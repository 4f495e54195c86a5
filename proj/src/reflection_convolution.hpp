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

#ifndef GPBEC_SRC_REFLECTION_CONVOLUTION_HPP
#define GPBEC_SRC_REFLECTION_CONVOLUTION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "fftw_buffer.hpp"
#include "gpbec/momentum_set.hpp"
#include "gpbec/potential.hpp"

namespace gpbec::detail {

/// Applies  (K x)_p = sum_q V^((p - q)/N) x_q  over a momentum set, for vectors
/// that are even under reflection of each coordinate. Such vectors are stored
/// on the closed positive octant only; the convolution then reduces to a
/// three dimensional DCT-I of side 2 e + 1 (e = set extent), which carries the
/// linear convolution exactly because the kernel is radial.
class ReflectionConvolution {
 public:
  ReflectionConvolution(const PotentialSpec& v, int N, const MomentumSet& set);

  std::size_t size() const { return points_.size(); }
  const std::vector<LatticeVector>& points() const { return points_; }
  /// Number of full-set points represented by each octant point.
  const std::vector<double>& weights() const { return weights_; }
  /// Octant index of |p| componentwise.
  std::size_t octant_index(const LatticeVector& p) const;

  void apply(std::span<const double> x, std::span<double> y) const;

  /// sum over the full kernel box of |V^(d/N)|; bounds the row sums of K.
  double kernel_abs_sum() const { return abs_sum_; }

 private:
  std::size_t flat(int i, int j, int k) const {
    return (std::size_t(i) * std::size_t(n_) + std::size_t(j)) * std::size_t(n_) + std::size_t(k);
  }

  int extent_ = 0;
  int n_ = 0;  // DCT-I length per axis, 2 extent + 1
  std::vector<LatticeVector> points_;
  std::vector<double> weights_;
  std::vector<std::size_t> grid_index_;
  std::vector<std::int32_t> octant_lookup_;  // (extent+1)^3 -> octant index or -1
  FftwArray<double> spectrum_;
  FftwArray<double> work_;
  FftwPlan plan_;
  double abs_sum_ = 0.0;
};

}  // namespace gpbec::detail

#endif  // GPBEC_SRC_REFLECTION_CONVOLUTION_HPP
