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

#ifndef GPBEC_POTENTIAL_HPP
#define GPBEC_POTENTIAL_HPP

#include <array>
#include <string>
#include <string_view>

namespace gpbec {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using Vec3 = std::array<double, 3>;

enum class Profile {
  uniform_ball,  ///< V(x) = height for |x| <= radius
  soft_radial,   ///< V(x) = height * (1 - |x|^2 / radius^2) for |x| <= radius
};

Profile parse_profile(std::string_view name);
std::string to_string(Profile profile);

/// Radially symmetric, compactly supported, nonnegative interaction profile
/// together with its coupling constant.
struct PotentialSpec {
  Profile profile = Profile::uniform_ball;
  double radius = 1.0;
  double height = 1.0;
  double kappa = 0.0;

  /// Throws std::invalid_argument unless radius > 0, height > 0, kappa >= 0.
  void validate() const;

  PotentialSpec with_kappa(double k) const {
    PotentialSpec copy = *this;
    copy.kappa = k;
    return copy;
  }
};

/// V(r) at distance r from the origin (unit coupling).
double position_value(const PotentialSpec& v, double r);

/// Radial moment 4 pi int_0^R V(r) r^(2j+2) dr; j = 0 gives the integral of V.
double radial_moment(const PotentialSpec& v, int j);

/// Fourier transform  V^(k) = int V(x) exp(-i k.x) dx  at |k| = k_norm.
/// Real and even; V^(0) equals the integral of V.
double fourier_coefficient(const PotentialSpec& v, double k_norm);
double fourier_coefficient(const PotentialSpec& v, const Vec3& k);

/// (1/N) V^(r/N), the transform of the Gross-Pitaevskii scaled potential
/// N^2 V(N x) evaluated at the momentum r.
double scaled_fourier_coefficient(const PotentialSpec& v, const Vec3& r, int N);

}  // namespace gpbec

#endif  // GPBEC_POTENTIAL_HPP
