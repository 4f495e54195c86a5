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

#include "gpbec/bogoliubov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gpbec/errors.hpp"

namespace gpbec {

namespace {

double inf_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

ExpResult taylor(const SparseMatrix& B, double t, const Eigen::VectorXd& x) {
  ExpResult out;
  out.method = ExpMethod::taylor_scaled;
  const double norm = inf_norm(B) * std::abs(t);
  const int steps = std::max(1, int(std::ceil(norm)));
  const double h = t / steps;
  Eigen::VectorXd y = x, term(x.size());
  for (int s = 0; s < steps; ++s) {
    term = y;
    Eigen::VectorXd acc = y;
    for (int k = 1; k <= 60; ++k) {
      term = (h / k) * (B * term);
      ++out.matvecs;
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    y = acc;
  }
  out.y = std::move(y);
  return out;
}

ExpResult krylov(const SparseMatrix& B, double t, const Eigen::VectorXd& x, int m_max, double tol) {
  ExpResult out;
  out.method = ExpMethod::krylov;
  const Eigen::Index n = x.size();
  const Eigen::Index m = std::min<Eigen::Index>(m_max, n);
  Eigen::VectorXd y = x;
  double done = 0.0;
  double h = t;
  const double sign = t < 0 ? -1.0 : 1.0;
  Eigen::MatrixXd V(n, m + 1);
  while (std::abs(done) < std::abs(t)) {
    const double beta = y.norm();
    if (beta == 0.0) break;
    V.col(0) = y / beta;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::Index k = 0;
    bool happy = false;
    for (; k < m; ++k) {
      Eigen::VectorXd w = B * V.col(k);
      ++out.matvecs;
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd c = V.leftCols(k + 1).transpose() * w;
        H.col(k).head(k + 1) += c;
        w -= V.leftCols(k + 1) * c;
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) <= 1e-14 * beta) {
        happy = true;
        ++k;
        break;
      }
      V.col(k + 1) = w / H(k + 1, k);
    }
    const Eigen::Index size = happy ? k : m;
    const Eigen::MatrixXd Hm = H.topLeftCorner(size, size);
    const double remaining = t - done;
    h = sign * std::min(std::abs(h), std::abs(remaining));
    for (int tries = 0;; ++tries) {
      const Eigen::MatrixXd E = (h * Hm).exp();
      const double err = happy ? 0.0 : beta * H(size, size - 1) * std::abs(h * E(size - 1, 0));
      if (err <= tol * std::abs(h / t) * std::max(1.0, x.norm()) || tries > 40) {
        if (tries > 40) throw NoConvergence("Krylov exponential step size collapsed", err);
        y = beta * (V.leftCols(size) * E.col(0));
        done += h;
        if (err < 0.1 * tol * std::abs(h / t)) h *= 2.0;
        break;
      }
      h *= 0.5;
    }
  }
  out.y = std::move(y);
  return out;
}

Eigen::VectorXd diag_values(const SparseHermitianOperator& op) {
  return Eigen::VectorXd(op.matrix.diagonal());
}

}  // namespace

std::string to_string(ExpMethod method) {
  switch (method) {
    case ExpMethod::automatic:
      return "auto";
    case ExpMethod::taylor_scaled:
      return "taylor_scaled";
    case ExpMethod::krylov:
      return "krylov";
  }
  return "unknown";
}

ExpResult apply_exp(const UnitaryApplication& u, double t, const Eigen::VectorXd& x) {
  const auto& B = u.generator;
  if (B.symmetry != Symmetry::antisymmetric) throw std::invalid_argument("generator must be antisymmetric");
  if (std::size_t(x.size()) != B.dim()) throw std::invalid_argument("vector size does not match generator");
  if (!x.allFinite()) throw std::invalid_argument("input vector is not finite");

  ExpMethod method = u.method;
  if (method == ExpMethod::automatic)
    method = B.dim() <= u.taylor_limit ? ExpMethod::taylor_scaled : ExpMethod::krylov;

  ExpResult out;
  if (t == 0.0 || B.matrix.nonZeros() == 0) {
    out.y = x;
    out.method = method;
  } else if (method == ExpMethod::taylor_scaled) {
    out = taylor(B.matrix, t, x);
  } else {
    out = krylov(B.matrix, t, x, u.krylov_dim, u.tol);
  }
  out.norm_drift = std::abs(out.y.norm() - x.norm());
  if (out.norm_drift > u.tol)
    throw NoConvergence("exponential lost unitarity beyond tolerance", out.norm_drift,
                        std::vector<double>(out.y.data(), out.y.data() + out.y.size()));
  return out;
}

TrialReport trial_energy(const PotentialSpec& v, int N, double mu, const ScatteringSolution& phi, bool with_exact,
                         std::size_t dim_cap, double tol_unitary, const EigenOptions& eigen) {
  if (N < 1 || N > 255) throw std::invalid_argument("trial state needs 1 <= N <= 255");
  const auto basis = enumerate_basis(phi.momenta, N, LatticeVector{}, dim_cap);
  const AssemblyParams params{v, N, mu, &phi};
  const auto H = assemble(OperatorTag::Hmu, basis, params);
  UnitaryApplication u{assemble(OperatorTag::Bgen, basis, params)};
  u.tol = tol_unitary;

  Eigen::VectorXd omega = Eigen::VectorXd::Zero(Eigen::Index(basis.dim()));
  omega(Eigen::Index(*basis.condensate_index(N))) = 1.0;
  const auto rotated = apply_exp(u, 1.0, omega);

  TrialReport rep;
  rep.n = N;
  rep.dim = basis.dim();
  rep.mu = mu;
  rep.norm_drift = rotated.norm_drift;
  rep.trial_energy = rotated.y.dot(H.matrix * rotated.y) / rotated.y.squaredNorm();
  if (with_exact) rep.exact_energy = ground_state(H, eigen).energy;
  return rep;
}

CommutatorReport commutator_identity_residual(const FockBasis& basis, const PotentialSpec& v, int N,
                                              const ScatteringSolution& phi, std::optional<double> inner_cutoff) {
  const AssemblyParams params{v, N, 0.0, &phi};
  SparseHermitianOperator A{"H1+Q4", Symmetry::symmetric,
                            assemble(OperatorTag::H1, basis, params).matrix +
                                assemble(OperatorTag::Q4, basis, params).matrix};
  const auto B = assemble(OperatorTag::Bgen, basis, params);
  auto R = commutator(A, B);
  R.matrix += assemble(OperatorTag::Q2, basis, params).matrix;
  R.matrix -= assemble(OperatorTag::Gamma1, basis, params).matrix;
  R.matrix -= assemble(OperatorTag::Gamma2, basis, params).matrix;
  R.name = "R";

  CommutatorReport rep;
  rep.dim = basis.dim();
  rep.inner_cutoff = inner_cutoff.value_or(0.5 * basis.momenta()->cutoff());
  for (Eigen::Index r = 0; r < R.matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(R.matrix, r); it; ++it)
      rep.max_entry = std::max(rep.max_entry, std::abs(it.value()));
  rep.full_norm = spectral_norm(R);

  const double bound = rep.inner_cutoff * rep.inner_cutoff * (1.0 + 1e-12);
  std::vector<Eigen::Index> inner;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    bool keep = true;
    for (std::size_t m = 1; m < basis.num_modes() && keep; ++m)
      if (basis.occupation(i, m) && basis.mode_momentum(m).momentum_norm2() > bound) keep = false;
    if (keep) inner.push_back(Eigen::Index(i));
  }
  rep.inner_dim = inner.size();
  if (!inner.empty()) {
    const Eigen::Index k = Eigen::Index(inner.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = R.matrix.coeff(inner[std::size_t(a)], inner[std::size_t(b)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    rep.restricted_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return rep;
}

std::vector<CommutatorReport> commutator_refinement(const PotentialSpec& v, int N, int n, double base_cutoff,
                                                    int levels, std::size_t dim_cap,
                                                    const LinearSolveOptions& linear) {
  if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
  std::vector<CommutatorReport> out;
  for (int level = 0; level <= levels; ++level) {
    const double cutoff = base_cutoff * std::ldexp(1.0, level);
    auto set = std::make_shared<const MomentumSet>(build_momentum_set(cutoff));
    const auto phi = solve_lattice_scattering(v, N, set, linear);
    const auto basis = enumerate_basis(set, n, LatticeVector{}, dim_cap);
    out.push_back(commutator_identity_residual(basis, v, N, phi, 0.5 * base_cutoff));
  }
  return out;
}

NplusCommutatorReport nplus_commutator_check(const FockBasis& basis, const ScatteringSolution& phi, int N) {
  const AssemblyParams params{phi.potential, N, 0.0, &phi};
  const auto direct = commutator(assemble(OperatorTag::Nplus, basis, params), assemble(OperatorTag::Bgen, basis, params));
  const auto closed = nplus_generator_commutator(basis, phi, N);
  NplusCommutatorReport rep;
  const SparseMatrix d = direct.matrix - closed.matrix;
  for (Eigen::Index r = 0; r < d.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(d, r); it; ++it) rep.max_diff = std::max(rep.max_diff, std::abs(it.value()));
  const double half = 0.5 * closed.matrix.norm();
  rep.half_weight_ratio = half > 0.0 ? direct.matrix.norm() / half : 0.0;
  return rep;
}

GrowthReport nplus_growth_check(const FockBasis& basis, const ScatteringSolution& phi, int N,
                                std::span<const double> t_grid, int trials, std::uint64_t seed, double tol_unitary) {
  if (basis.n_max() > 10 * N) throw std::invalid_argument("growth check needs n <= 10 N");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  for (double t : t_grid)
    if (!(t >= -1.0 && t <= 1.0)) throw std::invalid_argument("t grid must lie in [-1, 1]");

  const AssemblyParams params{phi.potential, N, 0.0, &phi};
  UnitaryApplication u{assemble(OperatorTag::Bgen, basis, params)};
  u.tol = tol_unitary;
  const Eigen::VectorXd w = diag_values(assemble(OperatorTag::Nplus, basis, params)).array() + 1.0;
  const Eigen::Index dim = Eigen::Index(basis.dim());

  GrowthReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  rep.max_ratio.fill(0.0);

  Eigen::VectorXd x(dim);
  for (int j = 0; j < trials; ++j) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(j)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss;
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = gauss(rng);
    x.normalize();
    for (double t : t_grid) {
      const auto r = apply_exp(u, t, x);
      rep.max_norm_drift = std::max(rep.max_norm_drift, r.norm_drift);
      Eigen::VectorXd wk = Eigen::VectorXd::Ones(dim);
      for (int k = 0; k < 3; ++k) {
        wk = wk.cwiseProduct(w);
        const double num = (r.y.array().square() * wk.array()).sum();
        const double den = (x.array().square() * wk.array()).sum();
        rep.max_ratio[std::size_t(k)] = std::max(rep.max_ratio[std::size_t(k)], num / den);
      }
    }
  }
  return rep;
}

}  // namespace gpbec
