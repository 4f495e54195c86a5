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

#include "gpbec/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace gpbec {

namespace {

// Below these values of |k|R the closed forms lose digits to cancellation and
// the moment series is used instead.
constexpr double kBallSeriesBelow = 1e-2;
constexpr int kBallSeriesTerms = 4;
constexpr double kSoftSeriesBelow = 0.5;
constexpr int kSoftSeriesTerms = 10;

double moment_series(const PotentialSpec& v, double k, int terms) {
  double sum = 0.0;
  double k2 = k * k;
  double kpow = 1.0;      // k^(2j)
  double factorial = 1.0;  // (2j+1)!
  for (int j = 0; j < terms; ++j) {
    if (j > 0) {
      kpow *= k2;
      factorial *= double(2 * j) * double(2 * j + 1);
    }
    double term = kpow / factorial * radial_moment(v, j);
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace

Profile parse_profile(std::string_view name) {
  if (name == "uniform_ball") return Profile::uniform_ball;
  if (name == "soft_radial") return Profile::soft_radial;
  throw std::invalid_argument("unknown potential profile '" + std::string(name) + "'");
}

std::string to_string(Profile profile) {
  switch (profile) {
    case Profile::uniform_ball:
      return "uniform_ball";
    case Profile::soft_radial:
      return "soft_radial";
  }
  return "unknown";
}

void PotentialSpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("potential radius must be positive");
  if (!(height > 0.0) || !std::isfinite(height))
    throw std::invalid_argument("potential height must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("coupling kappa must be nonnegative");
}

double position_value(const PotentialSpec& v, double r) {
  r = std::abs(r);
  if (r > v.radius) return 0.0;
  switch (v.profile) {
    case Profile::uniform_ball:
      return v.height;
    case Profile::soft_radial: {
      double s = r / v.radius;
      return v.height * (1.0 - s * s);
    }
  }
  return 0.0;
}

double radial_moment(const PotentialSpec& v, int j) {
  const double R = v.radius;
  const double scale = 4.0 * kPi * v.height * std::pow(R, 2 * j + 3);
  switch (v.profile) {
    case Profile::uniform_ball:
      return scale / double(2 * j + 3);
    case Profile::soft_radial:
      return scale * 2.0 / (double(2 * j + 3) * double(2 * j + 5));
  }
  return 0.0;
}

double fourier_coefficient(const PotentialSpec& v, double k_norm) {
  const double k = std::abs(k_norm);
  const double R = v.radius;
  const double x = k * R;
  const double r3 = 4.0 * kPi * v.height * R * R * R;
  switch (v.profile) {
    case Profile::uniform_ball: {
      if (x < kBallSeriesBelow) return moment_series(v, k, kBallSeriesTerms);
      return r3 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
    }
    case Profile::soft_radial: {
      if (x < kSoftSeriesBelow) return moment_series(v, k, kSoftSeriesTerms);
      const double s = std::sin(x), c = std::cos(x);
      return r3 * (6.0 * s - 6.0 * x * c - 2.0 * x * x * s) / std::pow(x, 5);
    }
  }
  return 0.0;
}

double fourier_coefficient(const PotentialSpec& v, const Vec3& k) {
  return fourier_coefficient(v, std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
}

double scaled_fourier_coefficient(const PotentialSpec& v, const Vec3& r, int N) {
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  const double inv = 1.0 / double(N);
  return inv * fourier_coefficient(v, Vec3{r[0] * inv, r[1] * inv, r[2] * inv});
}

}  // namespace gpbec
