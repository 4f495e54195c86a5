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

#ifndef GPBEC_SCATTERING_HPP
#define GPBEC_SCATTERING_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpbec/momentum_set.hpp"
#include "gpbec/potential.hpp"

namespace gpbec {

enum class ScatteringBackend { automatic, dense, fft_cg, position_grid };

std::string to_string(ScatteringBackend backend);
ScatteringBackend parse_backend(std::string_view name);

struct LinearSolveOptions {
  double tol = 1e-10;  ///< absolute l2 residual of the truncated system
  ScatteringBackend backend = ScatteringBackend::automatic;
  std::size_t dense_limit = 5000;  ///< automatic picks dense up to this size
  int max_iterations = 0;          ///< 0: derived from a condition estimate
};

/// Solution of the truncated lattice scattering equation
///   p^2 phi_p + (kappa / 2N) sum_q V^((p - q)/N) phi_q = -(kappa/2) V^(p/N),
/// p, q ranging over the momentum set.
struct ScatteringSolution {
  std::shared_ptr<const MomentumSet> momenta;
  std::vector<double> phi;  ///< aligned with momenta->points()
  PotentialSpec potential;
  int N = 1;
  double kappa = 0.0;
  double residual_norm = 0.0;
  double tol = 0.0;
  int iterations = 0;
  ScatteringBackend backend = ScatteringBackend::dense;
  std::size_t sign_violations = 0;  ///< entries with phi_p >= 0 while kappa > 0
  double evenness_error = 0.0;      ///< max |phi_p - phi_{-p}|

  double at(const LatticeVector& p) const;
};

ScatteringSolution solve_lattice_scattering(const PotentialSpec& v, int N,
                                            std::shared_ptr<const MomentumSet> momenta,
                                            const LinearSolveOptions& options = {});

/// l2 norm of  A phi - b  for the truncated system, evaluated term by term.
/// O(|S|^2); meant for verification on small sets.
double direct_residual(const PotentialSpec& v, int N, const MomentumSet& momenta,
                       std::span<const double> phi);

/// Solves the same system with the potential applied as a multiplication
/// operator on a periodic position grid of `grid` points per side spanning a
/// box of side N, then maps the grid function back to lattice momenta. The
/// grid potential is the band-limited inverse transform of the V^(p/N)
/// samples; the result is exact once grid >= 4 * extent and aliased below.
ScatteringSolution solve_position_space(const PotentialSpec& v, int N,
                                        std::shared_ptr<const MomentumSet> momenta, int grid,
                                        double tol = 1e-12);

/// a_N with 4 pi a_N = (kappa/2) (V^(0) + (1/N) sum_p V^(p/N) phi_p).
double lattice_scattering_length(const ScatteringSolution& sol, const PotentialSpec& v);

/// Leading Born term kappa * int V / (8 pi).
double first_born_scattering_length(const PotentialSpec& v);

struct RadialGrid {
  int collocation_nodes = 48;  ///< Chebyshev nodes for the resolvent solve
  int nystrom_nodes = 96;      ///< Gauss-Legendre nodes for the spectral-radius check
};

/// Spectral radius of sqrt(v) (-Delta)^-1 sqrt(v), v = kappa V / 2, on the
/// radial Nystrom grid.
double born_spectral_radius(const PotentialSpec& v, const RadialGrid& grid = {});

/// 4 pi a = (kappa/2) int V - < v, (-Delta + v)^-1 v >,  v = kappa V / 2,
/// with the resolvent evaluated by Chebyshev collocation of the radial
/// problem on the support. Throws BornDivergence when the Born series for this
/// coupling does not converge.
double born_resolvent_scattering_length(const PotentialSpec& v, const RadialGrid& grid = {});

/// Zero-energy radial equation u'' = (kappa/2) V u, u(0) = 0, u'(0) = 1,
/// integrated across the support with RK4; outside the support
/// u(r) = c (r - a).
double radial_ode_scattering_length(const PotentialSpec& v, int steps = 20000);

struct ConvergenceRow {
  int N = 0;
  double cutoff = 0.0;
  double a_lattice = 0.0;
  double a_ode = 0.0;
  double abs_err = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::size_t momenta = 0;
  bool ok = true;
  std::string error;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double a_ode = 0.0;
  /// Least-squares slope of log|a_N - a| against log N; empty when fewer
  /// than two rows have a positive error.
  std::optional<double> slope;
};

using CutoffRule = std::function<double(int)>;

/// cutoff(N) = factor * N * 2 pi.
CutoffRule proportional_cutoff(double factor);

/// Solve failures are recorded in the row (ok = false) and the study continues.
ConvergenceStudy convergence_study(const PotentialSpec& v, std::span<const int> N_list,
                                   const CutoffRule& cutoff_rule,
                                   const LinearSolveOptions& options = {});

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

struct PhiNormReport {
  double sup_abs = 0.0;     ///< sup_p |phi_p|
  double l2 = 0.0;          ///< (sum_p phi_p^2)^(1/2)
  double weighted_l1 = 0.0; ///< (1/N) sum_p |V^(p/N) phi_p|
  double sup_p2 = 0.0;      ///< sup_p |p^2 phi_p|
  double kappa = 0.0;

  /// Each norm divided by kappa (zero when kappa == 0).
  PhiNormReport per_kappa() const;
};

PhiNormReport phi_norm_report(const ScatteringSolution& sol);

}  // namespace gpbec

#endif  // GPBEC_SCATTERING_HPP
