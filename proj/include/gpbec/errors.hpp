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

#ifndef GPBEC_ERRORS_HPP
#define GPBEC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpbec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed run configurations (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of a numerical method (CLI exit code 2).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative linear solve hit its iteration cap.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Eigensolver or exponential propagator did not reach its tolerance. Carries
/// the best iterate found.
class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, double residual,
                std::vector<double> best = {}, double best_value = 0.0)
      : NumericalError(what),
        residual_(residual),
        best_(std::move(best)),
        best_value_(best_value) {}
  double residual() const noexcept { return residual_; }
  const std::vector<double>& best_iterate() const noexcept { return best_; }
  double best_value() const noexcept { return best_value_; }

 private:
  double residual_;
  std::vector<double> best_;
  double best_value_;
};

/// The Born series of the continuum scattering problem does not converge for
/// this coupling (spectral radius of the Birman-Schwinger operator >= 1).
class BornDivergence : public NumericalError {
 public:
  BornDivergence(const std::string& what, double spectral_radius)
      : NumericalError(what), spectral_radius_(spectral_radius) {}
  double spectral_radius() const noexcept { return spectral_radius_; }

 private:
  double spectral_radius_;
};

class DimensionOverflow : public Error {
 public:
  DimensionOverflow(const std::string& what, std::size_t cap)
      : Error(what), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class MissingPhi : public Error {
 public:
  using Error::Error;
};

}  // namespace gpbec

#endif  // GPBEC_ERRORS_HPP
