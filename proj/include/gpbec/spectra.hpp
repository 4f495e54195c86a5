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

#ifndef GPBEC_SPECTRA_HPP
#define GPBEC_SPECTRA_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpbec/fock_basis.hpp"
#include "gpbec/operators.hpp"
#include "gpbec/scattering.hpp"

namespace gpbec {

struct EigenOptions {
  double tol = 1e-10;            ///< residual target tol * max(1, |E|)
  std::size_t dense_limit = 2000;
  int krylov_dim = 100;
  int max_restarts = 500;
  std::uint64_t seed = 20240917;
};

struct EigenResult {
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;  ///< ||H psi - E psi||
  int iterations = 0;     ///< matvecs (1 for the dense path)
  bool dense = false;
};

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Lowest eigenpair: dense for dim <= dense_limit, restarted Lanczos with
/// full reorthogonalization above. Throws NoConvergence with the best
/// Ritz pair attached.
EigenResult ground_state(const SparseHermitianOperator& op, const EigenOptions& options = {});
EigenResult dense_ground_state(const SparseHermitianOperator& op);
EigenResult lanczos_ground_state(const MatVec& apply, std::size_t dim, const EigenOptions& options = {});

/// max |eigenvalue| of a symmetric operator.
double spectral_norm(const SparseHermitianOperator& op, const EigenOptions& options = {});

struct CondensateObservables {
  double depletion = 0.0;              ///< <N_+>
  double condensate_occupation = 0.0;  ///< top eigenvalue of gamma
};

CondensateObservables depletion_and_condensate(std::span<const double> state, const FockBasis& basis);

struct GroundStateReport {
  int n = 0;
  LatticeVector total_momentum;
  std::size_t dim = 0;
  double energy = 0.0;
  double depletion = 0.0;
  double condensate_occupation = 0.0;
  double residual = 0.0;
  int solver_iters = 0;
  double condensate_energy = 0.0;  ///< <Omega, H Omega>, the pure condensate
  bool skipped = false;
  std::string note;
};

enum class MuMode { eight_pi_a, explicit_value };

std::string to_string(MuMode mode);
MuMode parse_mu_mode(std::string_view name);

struct ScanOptions {
  MuMode mu_mode = MuMode::eight_pi_a;
  double mu = 0.0;  ///< used when mu_mode == explicit_value
  LatticeVector total_momentum;
  std::size_t dim_cap = kDefaultDimCap;
  EigenOptions eigen;
  LinearSolveOptions linear;
};

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  ///< c0 + c1 n + c2 n^2
  double operator()(double n) const { return c0 + c1 * n + c2 * n * n; }
  /// Minimizer -c1 / 2 c2, empty unless c2 > 0.
  std::optional<double> vertex() const;
};

/// Least squares; needs at least three distinct points.
std::optional<QuadraticFit> fit_quadratic(std::span<const double> x, std::span<const double> y);

struct ScanResult {
  std::vector<GroundStateReport> rows;
  double mu = 0.0;
  double a_lattice = 0.0;  ///< a_N on the same momenta (0 for explicit mu without kappa)
  std::optional<int> argmin_n;
  std::optional<QuadraticFit> fit;
  std::optional<double> vertex;
  std::optional<double> predicted_n;  ///< N mu / (8 pi a_N)
};

/// 8 pi a_N with a_N from the scattering solve on the given momenta.
double eight_pi_a(const PotentialSpec& v, int N, const std::shared_ptr<const MomentumSet>& momenta,
                  const LinearSolveOptions& options = {});

/// Sector ground states of H_mu for n in [n_min, n_max]. Sectors above the
/// dimension cap are reported as skipped.
ScanResult grand_canonical_scan(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                                int n_min, int n_max, const ScanOptions& options = {});

/// 4 pi a N ((n/N) - 1)^2 - 4 pi a N.
double quadratic_energy_model(double a, int N, double n);

struct PositivityReport {
  std::vector<GroundStateReport> rows;
  int n_lo = 0, n_hi = 0;
  double mu = 0.0;
  double min_energy = 0.0;
  int argmin_n = 0;
  bool all_nonnegative = false;
  /// Quadratic fitted on the reference range [0, reference_n_max].
  std::optional<QuadraticFit> fit;
  bool predicted_positive = false;
  /// Positivity is only asserted where the fit predicts it.
  bool asserted = false;
  bool pass = true;
  std::string status;
};

PositivityReport sector_positivity_check(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                                         int n_lo, int n_hi, int reference_n_max, const ScanOptions& options = {});

}  // namespace gpbec

#endif  // GPBEC_SPECTRA_HPP
