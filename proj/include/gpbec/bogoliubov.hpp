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

#ifndef GPBEC_BOGOLIUBOV_HPP
#define GPBEC_BOGOLIUBOV_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpbec/fock_basis.hpp"
#include "gpbec/operators.hpp"
#include "gpbec/scattering.hpp"
#include "gpbec/spectra.hpp"

namespace gpbec {

enum class ExpMethod { automatic, taylor_scaled, krylov };

std::string to_string(ExpMethod method);

/// exp(t B) for an antisymmetric generator B.
struct UnitaryApplication {
  SparseHermitianOperator generator;
  ExpMethod method = ExpMethod::automatic;
  double tol = 1e-10;
  std::size_t taylor_limit = 20000;  ///< automatic uses Taylor up to this dimension
  int krylov_dim = 30;
};

struct ExpResult {
  Eigen::VectorXd y;
  double norm_drift = 0.0;  ///< | ||y|| - ||x|| |
  ExpMethod method = ExpMethod::taylor_scaled;
  int matvecs = 0;
};

ExpResult apply_exp(const UnitaryApplication& u, double t, const Eigen::VectorXd& x);

struct TrialReport {
  int n = 0;
  std::size_t dim = 0;
  double trial_energy = 0.0;
  std::optional<double> exact_energy;
  double norm_drift = 0.0;
  double mu = 0.0;
  std::optional<double> gap() const {
    if (!exact_energy) return std::nullopt;
    return trial_energy - *exact_energy;
  }
};

/// <e^B Omega, H_mu e^B Omega> with Omega the pure condensate of n = N
/// particles at total momentum 0, B built from phi. With `with_exact` the
/// sector ground energy is computed as well.
TrialReport trial_energy(const PotentialSpec& v, int N, double mu, const ScatteringSolution& phi,
                         bool with_exact = true, std::size_t dim_cap = kDefaultDimCap,
                         double tol_unitary = 1e-10, const EigenOptions& eigen = {});

struct CommutatorReport {
  std::size_t dim = 0;
  double full_norm = 0.0;        ///< ||R||
  double restricted_norm = 0.0;  ///< ||Pi R Pi||
  double max_entry = 0.0;
  double inner_cutoff = 0.0;
  std::size_t inner_dim = 0;
};

/// R = [H1 + Q4, B] + Q2 - Gamma1 - Gamma2 on the basis. Pi keeps the states
/// whose occupied momenta all have |p| <= inner_cutoff (default: half the
/// momentum cutoff).
CommutatorReport commutator_identity_residual(const FockBasis& basis, const PotentialSpec& v, int N,
                                              const ScatteringSolution& phi,
                                              std::optional<double> inner_cutoff = std::nullopt);

/// The residual at cutoffs base * 2^k, k = 0..levels, with Pi fixed by the
/// base cutoff. Each level solves for phi on its own momentum set.
std::vector<CommutatorReport> commutator_refinement(const PotentialSpec& v, int N, int n, double base_cutoff,
                                                    int levels, std::size_t dim_cap = kDefaultDimCap,
                                                    const LinearSolveOptions& linear = {});

struct NplusCommutatorReport {
  double max_diff = 0.0;         ///< direct [N_+, B] vs the closed form with 1/N
  double half_weight_ratio = 0.0;///< ||[N_+, B]|| / ||closed form with 1/2N||
};

NplusCommutatorReport nplus_commutator_check(const FockBasis& basis, const ScatteringSolution& phi, int N);

struct GrowthReport {
  std::array<double, 3> max_ratio{};  ///< k = 1, 2, 3
  double max_norm_drift = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_grid;
};

/// Max over random normalized x and t of
///   <e^{tB} x, (N_+ + 1)^k e^{tB} x> / <x, (N_+ + 1)^k x>.
/// Trial j draws its state from its own generator seeded from (seed, j),
/// so a run with more trials extends the sample of a shorter one.
GrowthReport nplus_growth_check(const FockBasis& basis, const ScatteringSolution& phi, int N,
                                std::span<const double> t_grid, int trials, std::uint64_t seed,
                                double tol_unitary = 1e-10);

}  // namespace gpbec

#endif  // GPBEC_BOGOLIUBOV_HPP
