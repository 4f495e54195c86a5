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

#ifndef GPBEC_CONFIG_HPP
#define GPBEC_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpbec/fock_basis.hpp"
#include "gpbec/momentum_set.hpp"
#include "gpbec/potential.hpp"
#include "gpbec/scattering.hpp"
#include "gpbec/spectra.hpp"

namespace gpbec {

/// Resolved run configuration. Parsed from a flat `key = value` file with
/// dotted section keys; `#` starts a comment, lists are comma separated.
struct RunConfig {
  PotentialSpec potential;

  std::optional<int> N;
  std::vector<int> N_list;
  double cutoff_factor = 4.0;

  /// Momentum cutoff of the Fock-space modes in units of 2 pi.
  double mode_cutoff = 1.0;
  int n_min = 0;
  int n_max = 0;
  LatticeVector total_momentum;

  MuMode mu_mode = MuMode::eight_pi_a;
  std::optional<double> mu_value;

  double tol_linear = 1e-10;
  double tol_eigen = 1e-10;
  double tol_unitary = 1e-10;
  std::size_t dim_cap = kDefaultDimCap;
  ScatteringBackend backend = ScatteringBackend::automatic;

  std::vector<double> trial_kappa_list;  ///< empty: just potential.kappa
  int identity_trials = 200;
  std::vector<double> identity_t_points{-1.0, -0.5, 0.5, 1.0};

  std::uint64_t rng_seed = 0;
  std::filesystem::path output_dir = ".";
  bool write_csv = true;
  bool write_json = true;

  /// Every key with its resolved value as text, defaults included.
  std::map<std::string, std::string> resolved() const;
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Every key the parser accepts.
const std::vector<std::string>& config_keys();

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace gpbec

#endif  // GPBEC_CONFIG_HPP
