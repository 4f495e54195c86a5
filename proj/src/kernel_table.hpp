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

#ifndef GPBEC_SRC_KERNEL_TABLE_HPP
#define GPBEC_SRC_KERNEL_TABLE_HPP

#include <cmath>
#include <vector>

#include "gpbec/momentum_set.hpp"
#include "gpbec/potential.hpp"

namespace gpbec::detail {

/// V^(d / N) for lattice vectors d, cached by the integer squared norm of d.
class KernelTable {
 public:
  KernelTable(const PotentialSpec& v, int N, long max_norm2) : values_(std::size_t(max_norm2) + 1) {
    for (long n2 = 0; n2 <= max_norm2; ++n2)
      values_[std::size_t(n2)] = fourier_coefficient(v, kTwoPi * std::sqrt(double(n2)) / double(N));
  }

  double operator()(long norm2) const { return values_[std::size_t(norm2)]; }
  double operator()(const LatticeVector& d) const { return values_[std::size_t(d.norm2_int())]; }
  long max_norm2() const { return long(values_.size()) - 1; }

 private:
  std::vector<double> values_;
};

}  // namespace gpbec::detail

#endif  // GPBEC_SRC_KERNEL_TABLE_HPP
