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

#include "gpbec/momentum_set.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace gpbec {

std::string to_string(const LatticeVector& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z) + ")";
}

std::optional<std::size_t> MomentumSet::index_of(const LatticeVector& p) const {
  const int e = extent_;
  if (points_.empty() || std::abs(p.x) > e || std::abs(p.y) > e || std::abs(p.z) > e)
    return std::nullopt;
  const std::size_t side = std::size_t(2 * e + 1);
  const std::size_t flat =
      (std::size_t(p.x + e) * side + std::size_t(p.y + e)) * side + std::size_t(p.z + e);
  const std::int32_t idx = cube_[flat];
  if (idx < 0) return std::nullopt;
  return std::size_t(idx);
}

MomentumSet build_momentum_set(double cutoff, std::vector<std::string>* warnings) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff))
    throw std::invalid_argument("momentum cutoff must be positive");

  MomentumSet set;
  set.cutoff_ = cutoff;

  // Compare squared integer norms against (cutoff / 2 pi)^2 with a relative
  // slack so that cutoffs such as 2 pi sqrt(3) include their boundary shell.
  const double ratio = cutoff / kTwoPi;
  const double bound = ratio * ratio * (1.0 + 1e-12);
  const int e = int(std::floor(ratio * (1.0 + 1e-12)));

  if (e < 1) {
    const std::string msg = "EmptySet: cutoff " + std::to_string(cutoff) +
                            " is below 2 pi, no nonzero lattice momentum is included";
    if (warnings)
      warnings->push_back(msg);
    else
      std::cerr << "warning: " << msg << '\n';
    return set;
  }

  for (int x = -e; x <= e; ++x)
    for (int y = -e; y <= e; ++y)
      for (int z = -e; z <= e; ++z) {
        const LatticeVector p{x, y, z};
        const long n2 = p.norm2_int();
        if (n2 != 0 && double(n2) <= bound) set.points_.push_back(p);
      }
  set.index_points();
  return set;
}

void MomentumSet::index_points() {
  extent_ = 0;
  for (const auto& p : points_) extent_ = std::max({extent_, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  const int e = extent_;
  const std::size_t side = std::size_t(2 * e + 1);
  cube_.assign(side * side * side, -1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    const std::size_t flat =
        (std::size_t(p.x + e) * side + std::size_t(p.y + e)) * side + std::size_t(p.z + e);
    if (cube_[flat] >= 0) throw std::invalid_argument("duplicate momentum " + to_string(p));
    cube_[flat] = std::int32_t(i);
  }
  negated_.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    auto j = index_of(-points_[i]);
    if (!j) throw std::invalid_argument("momentum set is not closed under negation at " + to_string(points_[i]));
    negated_[i] = *j;
  }
}

MomentumSet momentum_set_from_points(std::vector<LatticeVector> points) {
  if (points.empty()) throw std::invalid_argument("momentum set needs at least one point");
  std::sort(points.begin(), points.end());
  MomentumSet set;
  long max2 = 0;
  for (const auto& p : points) {
    if (p.is_zero()) throw std::invalid_argument("the zero mode is not part of a momentum set");
    max2 = std::max(max2, p.norm2_int());
  }
  set.points_ = std::move(points);
  set.cutoff_ = kTwoPi * std::sqrt(double(max2));
  set.index_points();
  return set;
}

}  // namespace gpbec
