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

#include "gpbec/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "gpbec/errors.hpp"

namespace gpbec {

namespace {

Eigen::MatrixXd to_dense(const SparseHermitianOperator& op) { return Eigen::MatrixXd(op.matrix); }

}  // namespace

EigenResult dense_ground_state(const SparseHermitianOperator& op) {
  if (op.dim() == 0) throw std::invalid_argument("operator has dimension 0");
  const Eigen::MatrixXd A = to_dense(op);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw NoConvergence("dense eigensolver failed", std::nan(""));
  EigenResult r;
  r.energy = es.eigenvalues()(0);
  r.vector = es.eigenvectors().col(0);
  r.residual = (A * r.vector - r.energy * r.vector).norm();
  r.iterations = 1;
  r.dense = true;
  return r;
}

EigenResult lanczos_ground_state(const MatVec& apply, std::size_t dim, const EigenOptions& options) {
  if (dim == 0) throw std::invalid_argument("operator has dimension 0");
  const Eigen::Index n = Eigen::Index(dim);
  // Keep the Krylov basis within a few hundred megabytes.
  const Eigen::Index budget = std::max<Eigen::Index>(20, Eigen::Index(50'000'000 / dim));
  const Eigen::Index m = std::min({Eigen::Index(options.krylov_dim), n, budget});

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = gauss(rng);
  start.normalize();

  Eigen::MatrixXd V(n, m);
  Eigen::VectorXd w(n), x(n), hx(n);
  EigenResult best;
  best.residual = std::numeric_limits<double>::infinity();
  int matvecs = 0;

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    V.col(0) = start;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      apply(V.col(k), w);
      ++matvecs;
      const double a = V.col(k).dot(w);
      alpha.push_back(a);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
      const double b = w.norm();
      if (k + 1 == m) break;
      if (b <= 1e-13 * std::max(1.0, std::abs(a))) {
        ++k;
        break;  // invariant subspace
      }
      beta.push_back(b);
      V.col(k + 1) = w / b;
    }
    const Eigen::Index size = Eigen::Index(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      T(i, i) = alpha[std::size_t(i)];
      if (i + 1 < size) T(i, i + 1) = T(i + 1, i) = beta[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()(0);
    x = V.leftCols(size) * es.eigenvectors().col(0);
    x.normalize();
    apply(x, hx);
    ++matvecs;
    const double res = (hx - theta * x).norm();
    if (res < best.residual) {
      best.energy = theta;
      best.vector = x;
      best.residual = res;
    }
    if (res <= options.tol * std::max(1.0, std::abs(theta))) {
      best.iterations = matvecs;
      return best;
    }
    start = x;
  }
  throw NoConvergence("Lanczos did not reach the eigen tolerance", best.residual,
                      std::vector<double>(best.vector.data(), best.vector.data() + best.vector.size()),
                      best.energy);
}

EigenResult ground_state(const SparseHermitianOperator& op, const EigenOptions& options) {
  if (!op.hermitian()) throw std::invalid_argument("ground_state needs a symmetric operator");
  if (op.dim() <= options.dense_limit) return dense_ground_state(op);
  MatVec apply = [&op](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = op.matrix * x; };
  return lanczos_ground_state(apply, op.dim(), options);
}

double spectral_norm(const SparseHermitianOperator& op, const EigenOptions& options) {
  if (op.dim() == 0) return 0.0;
  if (op.symmetry != Symmetry::symmetric) throw std::invalid_argument("spectral_norm needs a symmetric operator");
  if (op.dim() <= options.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(op), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  MatVec lo = [&op](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = op.matrix * x; };
  MatVec hi = [&op](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = -(op.matrix * x); };
  EigenOptions o = options;
  o.tol = std::max(options.tol, 1e-8);
  return std::max(std::abs(lanczos_ground_state(lo, op.dim(), o).energy),
                  std::abs(lanczos_ground_state(hi, op.dim(), o).energy));
}

CondensateObservables depletion_and_condensate(std::span<const double> state, const FockBasis& basis) {
  if (state.size() != basis.dim()) throw std::invalid_argument("state size does not match basis");
  CondensateObservables obs;
  for (std::size_t i = 0; i < basis.dim(); ++i) obs.depletion += state[i] * state[i] * basis.excited_number(i);
  const Eigen::MatrixXd gamma = one_particle_density_matrix(state, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma, Eigen::EigenvaluesOnly);
  obs.condensate_occupation = es.eigenvalues().maxCoeff();
  return obs;
}

std::string to_string(MuMode mode) { return mode == MuMode::eight_pi_a ? "eight_pi_a" : "explicit"; }

MuMode parse_mu_mode(std::string_view name) {
  if (name == "eight_pi_a") return MuMode::eight_pi_a;
  if (name == "explicit") return MuMode::explicit_value;
  throw std::invalid_argument("unknown mu mode '" + std::string(name) + "'");
}

std::optional<double> QuadraticFit::vertex() const {
  if (!(c2 > 0.0)) return std::nullopt;
  return -c1 / (2.0 * c2);
}

std::optional<QuadraticFit> fit_quadratic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const Eigen::Index n = Eigen::Index(x.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = x[std::size_t(i)];
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = t * t;
    b(i) = y[std::size_t(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 3) return std::nullopt;
  const Eigen::Vector3d c = qr.solve(b);
  return QuadraticFit{c(0), c(1), c(2)};
}

double eight_pi_a(const PotentialSpec& v, int N, const std::shared_ptr<const MomentumSet>& momenta,
                  const LinearSolveOptions& options) {
  if (v.kappa == 0.0) return 0.0;
  if (!momenta || momenta->empty()) return 8.0 * kPi * first_born_scattering_length(v);
  const auto sol = solve_lattice_scattering(v, N, momenta, options);
  return 8.0 * kPi * lattice_scattering_length(sol, v);
}

namespace {

double resolve_mu(const PotentialSpec& v, int N, const std::shared_ptr<const MomentumSet>& momenta,
                  const ScanOptions& options, double& a_lattice) {
  a_lattice = eight_pi_a(v, N, momenta, options.linear) / (8.0 * kPi);
  return options.mu_mode == MuMode::eight_pi_a ? 8.0 * kPi * a_lattice : options.mu;
}

GroundStateReport sector_report(const PotentialSpec& v, int N, double mu,
                                const std::shared_ptr<const MomentumSet>& momenta, int n,
                                const ScanOptions& options) {
  GroundStateReport row;
  row.n = n;
  row.total_momentum = options.total_momentum;
  try {
    const auto basis = enumerate_basis(momenta, n, options.total_momentum, options.dim_cap);
    row.dim = basis.dim();
    if (basis.dim() == 0) {
      row.skipped = true;
      row.note = "empty sector";
      return row;
    }
    const auto H = assemble(OperatorTag::Hmu, basis, AssemblyParams{v, N, mu, nullptr});
    const auto gs = ground_state(H, options.eigen);
    row.energy = gs.energy;
    row.residual = gs.residual;
    row.solver_iters = gs.iterations;
    const auto obs = depletion_and_condensate(std::span<const double>(gs.vector.data(), basis.dim()), basis);
    row.depletion = obs.depletion;
    row.condensate_occupation = obs.condensate_occupation;
    if (auto c = basis.condensate_index(n)) row.condensate_energy = H.matrix.coeff(Eigen::Index(*c), Eigen::Index(*c));
  } catch (const DimensionOverflow& ex) {
    row.skipped = true;
    row.note = ex.what();
  }
  return row;
}

}  // namespace

ScanResult grand_canonical_scan(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                                int n_min, int n_max, const ScanOptions& options) {
  v.validate();
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  if (!momenta) throw std::invalid_argument("momentum set is null");
  if (n_min < 0 || n_max < n_min) throw std::invalid_argument("need 0 <= n_min <= n_max");

  ScanResult out;
  out.mu = resolve_mu(v, N, momenta, options, out.a_lattice);
  std::vector<double> xs, ys;
  double best = std::numeric_limits<double>::infinity();
  for (int n = n_min; n <= n_max; ++n) {
    auto row = sector_report(v, N, out.mu, momenta, n, options);
    if (!row.skipped) {
      xs.push_back(n);
      ys.push_back(row.energy);
      if (row.energy < best) {
        best = row.energy;
        out.argmin_n = n;
      }
    }
    out.rows.push_back(std::move(row));
  }
  out.fit = fit_quadratic(xs, ys);
  if (out.fit) out.vertex = out.fit->vertex();
  if (out.a_lattice > 0.0) out.predicted_n = N * out.mu / (8.0 * kPi * out.a_lattice);
  return out;
}

double quadratic_energy_model(double a, int N, double n) {
  const double x = n / N - 1.0;
  return 4.0 * kPi * a * N * x * x - 4.0 * kPi * a * N;
}

PositivityReport sector_positivity_check(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                                         int n_lo, int n_hi, int reference_n_max, const ScanOptions& options) {
  if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("need 0 <= n_lo <= n_hi");
  PositivityReport rep;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;

  const auto reference = grand_canonical_scan(v, N, momenta, 0, reference_n_max, options);
  rep.mu = reference.mu;
  rep.fit = reference.fit;
  if (rep.fit) {
    rep.predicted_positive = true;
    for (int n = n_lo; n <= n_hi; ++n)
      if ((*rep.fit)(n) < 0.0) rep.predicted_positive = false;
  }

  rep.min_energy = std::numeric_limits<double>::infinity();
  for (int n = n_lo; n <= n_hi; ++n) {
    auto row = sector_report(v, N, rep.mu, momenta, n, options);
    if (row.skipped) throw DimensionOverflow(row.note, options.dim_cap);
    if (row.energy < rep.min_energy) {
      rep.min_energy = row.energy;
      rep.argmin_n = n;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.all_nonnegative = rep.min_energy >= 0.0;
  rep.asserted = rep.predicted_positive;
  rep.pass = !rep.asserted || rep.all_nonnegative;
  if (!rep.asserted)
    rep.status = "not asserted: the reference fit does not predict positivity on this range";
  else
    rep.status = rep.all_nonnegative ? "positive as predicted" : "negative sector energy despite positive prediction";
  return rep;
}

}  // namespace gpbec
