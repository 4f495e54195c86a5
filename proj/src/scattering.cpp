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

#include "gpbec/scattering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "fftw_buffer.hpp"
#include "gpbec/errors.hpp"
#include "kernel_table.hpp"
#include "reflection_convolution.hpp"

namespace gpbec {

namespace {

void check_inputs(const PotentialSpec& v, int N, const std::shared_ptr<const MomentumSet>& momenta) {
  v.validate();
  if (N < 1) throw std::invalid_argument("N must be a positive integer");
  if (!momenta) throw std::invalid_argument("momentum set is null");
  if (momenta->empty()) throw std::invalid_argument("momentum set is empty");
}

// Evenness and sign diagnostics shared by every backend.
void finish(ScatteringSolution& sol) {
  const auto& set = *sol.momenta;
  sol.evenness_error = 0.0;
  sol.sign_violations = 0;
  for (double& x : sol.phi)
    if (x == 0.0) x = 0.0;  // drop the sign of -0
  for (std::size_t i = 0; i < set.size(); ++i) {
    sol.evenness_error = std::max(sol.evenness_error, std::abs(sol.phi[i] - sol.phi[set.negated(i)]));
    if (sol.kappa > 0.0 && !(sol.phi[i] < 0.0)) ++sol.sign_violations;
  }
}

ScatteringSolution solve_dense(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                               const LinearSolveOptions& options) {
  const auto& set = *momenta;
  const std::size_t n = set.size();
  const int e = set.extent();
  const detail::KernelTable table(v, N, 12L * e * e);
  const double coupling = v.kappa / (2.0 * N);

  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = set[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const double k = coupling * table(p - set[j]);
      A(i, j) = k;
      A(j, i) = k;
    }
    A(i, i) += p.momentum_norm2();
    b(i) = -0.5 * v.kappa * table(p);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NumericalError("scattering matrix is not positive definite");
  Eigen::VectorXd x = llt.solve(b);

  ScatteringSolution sol;
  sol.momenta = std::move(momenta);
  sol.phi.assign(x.data(), x.data() + n);
  sol.potential = v;
  sol.N = N;
  sol.kappa = v.kappa;
  sol.residual_norm = (A * x - b).norm();
  sol.tol = options.tol;
  sol.iterations = 1;
  sol.backend = ScatteringBackend::dense;
  if (sol.residual_norm > options.tol)
    throw NonConvergence("dense scattering solve residual above tolerance", sol.residual_norm, 1);
  return sol;
}

ScatteringSolution solve_fft_cg(const PotentialSpec& v, int N, std::shared_ptr<const MomentumSet> momenta,
                                const LinearSolveOptions& options) {
  const auto& set = *momenta;
  const detail::ReflectionConvolution conv(v, N, set);
  const std::size_t m = conv.size();
  const auto& pts = conv.points();
  const auto& w = conv.weights();
  const double coupling = v.kappa / (2.0 * N);

  std::vector<double> diag(m), b(m);
  for (std::size_t i = 0; i < m; ++i) {
    diag[i] = pts[i].momentum_norm2();
    b[i] = -0.5 * v.kappa * fourier_coefficient(v, kTwoPi * std::sqrt(double(pts[i].norm2_int())) / N);
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    conv.apply(x, y);
    for (std::size_t i = 0; i < m; ++i) y[i] = diag[i] * x[i] + coupling * y[i];
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w[i] * a[i] * c[i];
    return s;
  };

  // The Jacobi-preconditioned operator is bounded below by the identity since
  // the convolution is positive semidefinite for V >= 0.
  const double cond_bound = 1.0 + coupling * conv.kernel_abs_sum() / (kTwoPi * kTwoPi);
  const int cap = options.max_iterations > 0
                      ? options.max_iterations
                      : std::max(100, int(std::ceil(10.0 * std::sqrt(cond_bound))));

  std::vector<double> x(m), r(m), z(m), p(m), Ap(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / diag[i];
  auto true_residual = [&]() {
    apply(x, Ap);
    for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - Ap[i];
    return std::sqrt(dot(r, r));
  };

  double res = true_residual();
  int it = 0;
  while (res > options.tol && it < cap) {
    for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z);
    while (it < cap) {
      apply(p, Ap);
      ++it;
      const double alpha = rz / dot(p, Ap);
      for (std::size_t i = 0; i < m; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * Ap[i];
      }
      if (std::sqrt(dot(r, r)) <= 0.5 * options.tol) break;
      for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
    }
    res = true_residual();
  }
  if (res > options.tol)
    throw NonConvergence("FFT-CG scattering solve hit the iteration cap", res, it);

  ScatteringSolution sol;
  sol.phi.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) sol.phi[i] = x[conv.octant_index(set[i])];
  sol.momenta = std::move(momenta);
  sol.potential = v;
  sol.N = N;
  sol.kappa = v.kappa;
  sol.residual_norm = res;
  sol.tol = options.tol;
  sol.iterations = it;
  sol.backend = ScatteringBackend::fft_cg;
  return sol;
}

}  // namespace

std::string to_string(ScatteringBackend backend) {
  switch (backend) {
    case ScatteringBackend::automatic:
      return "auto";
    case ScatteringBackend::dense:
      return "dense";
    case ScatteringBackend::fft_cg:
      return "fft_cg";
    case ScatteringBackend::position_grid:
      return "position_grid";
  }
  return "unknown";
}

ScatteringBackend parse_backend(std::string_view name) {
  if (name == "auto") return ScatteringBackend::automatic;
  if (name == "dense") return ScatteringBackend::dense;
  if (name == "fft_cg") return ScatteringBackend::fft_cg;
  throw std::invalid_argument("unknown scattering backend '" + std::string(name) + "'");
}

double ScatteringSolution::at(const LatticeVector& p) const {
  auto idx = momenta->index_of(p);
  if (!idx) throw std::out_of_range("momentum " + to_string(p) + " not in set");
  return phi[*idx];
}

ScatteringSolution solve_lattice_scattering(const PotentialSpec& v, int N,
                                            std::shared_ptr<const MomentumSet> momenta,
                                            const LinearSolveOptions& options) {
  check_inputs(v, N, momenta);
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");

  ScatteringBackend backend = options.backend;
  if (backend == ScatteringBackend::automatic)
    backend = momenta->size() <= options.dense_limit ? ScatteringBackend::dense : ScatteringBackend::fft_cg;

  ScatteringSolution sol;
  switch (backend) {
    case ScatteringBackend::dense:
      sol = solve_dense(v, N, std::move(momenta), options);
      break;
    case ScatteringBackend::fft_cg:
      sol = solve_fft_cg(v, N, std::move(momenta), options);
      break;
    default:
      throw std::invalid_argument("backend not available for the lattice solve");
  }
  finish(sol);
  return sol;
}

double direct_residual(const PotentialSpec& v, int N, const MomentumSet& set, std::span<const double> phi) {
  const detail::KernelTable table(v, N, 12L * set.extent() * set.extent());
  const double coupling = v.kappa / (2.0 * N);
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& p = set[i];
    double row = p.momentum_norm2() * phi[i] + 0.5 * v.kappa * table(p);
    double conv = 0.0;
    for (std::size_t j = 0; j < set.size(); ++j) conv += table(p - set[j]) * phi[j];
    row += coupling * conv;
    sum += row * row;
  }
  return std::sqrt(sum);
}

ScatteringSolution solve_position_space(const PotentialSpec& v, int N,
                                        std::shared_ptr<const MomentumSet> momenta, int grid, double tol) {
  check_inputs(v, N, momenta);
  const auto& set = *momenta;
  if (grid < 2 * set.extent() + 1)
    throw std::invalid_argument("position grid of " + std::to_string(grid) +
                                " points cannot resolve momenta of extent " + std::to_string(set.extent()));

  using cd = std::complex<double>;
  const std::size_t G = std::size_t(grid);
  const std::size_t total = G * G * G;
  auto flat = [G](std::size_t i, std::size_t j, std::size_t k) { return (i * G + j) * G + k; };
  auto freq = [grid](std::size_t j) { return int(j) <= grid / 2 ? int(j) : int(j) - grid; };

  auto buf = detail::fftw_array<fftw_complex>(total);
  auto* data = reinterpret_cast<cd*>(buf.get());
  detail::FftwPlan forward(fftw_plan_dft_3d(grid, grid, grid, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  detail::FftwPlan backward(fftw_plan_dft_3d(grid, grid, grid, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE));

  std::vector<double> k2(total);
  std::vector<char> in_set(total, 0);
  for (std::size_t i = 0; i < G; ++i)
    for (std::size_t j = 0; j < G; ++j)
      for (std::size_t k = 0; k < G; ++k) {
        const LatticeVector m{freq(i), freq(j), freq(k)};
        k2[flat(i, j, k)] = m.momentum_norm2() / (double(N) * N);
        in_set[flat(i, j, k)] = set.contains(m) ? 1 : 0;
        data[flat(i, j, k)] = fourier_coefficient(v, kTwoPi * std::sqrt(double(m.norm2_int())) / N);
      }

  // Band-limited potential on the grid: (1/N^3) sum_p exp(i p.x / N) V^(p/N).
  backward.execute();
  const double n3 = double(N) * N * N;
  std::vector<double> vgrid(total);
  for (std::size_t i = 0; i < total; ++i) vgrid[i] = data[i].real() / n3;

  const double g3 = double(total);
  // Projection onto the momentum set followed by the inverse transform.
  auto project_back = [&](std::vector<double>& out) {
    for (std::size_t i = 0; i < total; ++i)
      if (!in_set[i]) data[i] = 0.0;
    backward.execute();
    for (std::size_t i = 0; i < total; ++i) out[i] = data[i].real() / g3;
  };

  std::vector<cd> spectrum(total);
  auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (std::size_t i = 0; i < total; ++i) data[i] = u[i];
    forward.execute();
    for (std::size_t i = 0; i < total; ++i) spectrum[i] = k2[i] * data[i];
    for (std::size_t i = 0; i < total; ++i) data[i] = vgrid[i] * u[i];
    forward.execute();
    for (std::size_t i = 0; i < total; ++i) data[i] = spectrum[i] + 0.5 * v.kappa * data[i];
    project_back(out);
  };

  std::vector<double> b(total);
  for (std::size_t i = 0; i < total; ++i) data[i] = -0.5 * v.kappa / (double(N) * N) * vgrid[i];
  forward.execute();
  project_back(b);

  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    return std::inner_product(a.begin(), a.end(), c.begin(), 0.0);
  };

  std::vector<double> u(total, 0.0), r = b, p = b, Ap(total);
  const double bnorm = std::sqrt(dot(b, b));
  double rr = dot(r, r);
  int it = 0;
  const int cap = 5000;
  while (std::sqrt(rr) > tol * bnorm && it < cap) {
    apply(p, Ap);
    ++it;
    const double alpha = rr / dot(p, Ap);
    for (std::size_t i = 0; i < total; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < total; ++i) p[i] = r[i] + rr_new / rr * p[i];
    rr = rr_new;
  }
  if (std::sqrt(rr) > tol * bnorm)
    throw NonConvergence("position-space scattering solve did not converge", std::sqrt(rr), it);

  for (std::size_t i = 0; i < total; ++i) data[i] = u[i];
  forward.execute();
  auto wrap = [grid](int m) { return std::size_t(m < 0 ? m + grid : m); };

  ScatteringSolution sol;
  sol.phi.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& q = set[i];
    sol.phi[i] = n3 / g3 * data[flat(wrap(q.x), wrap(q.y), wrap(q.z))].real();
  }
  sol.residual_norm = direct_residual(v, N, set, sol.phi);
  sol.momenta = std::move(momenta);
  sol.potential = v;
  sol.N = N;
  sol.kappa = v.kappa;
  sol.tol = tol;
  sol.iterations = it;
  sol.backend = ScatteringBackend::position_grid;
  finish(sol);
  return sol;
}

double lattice_scattering_length(const ScatteringSolution& sol, const PotentialSpec& v) {
  if (v.kappa != sol.kappa || v.profile != sol.potential.profile || v.radius != sol.potential.radius ||
      v.height != sol.potential.height)
    throw std::invalid_argument("potential does not match the one the solution was computed for");
  const auto& set = *sol.momenta;
  const detail::KernelTable table(v, sol.N, 3L * set.extent() * set.extent());
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) sum += table(set[i]) * sol.phi[i];
  const double four_pi_a = 0.5 * v.kappa * (fourier_coefficient(v, 0.0) + sum / sol.N);
  return four_pi_a / (4.0 * kPi);
}

double first_born_scattering_length(const PotentialSpec& v) {
  return v.kappa * fourier_coefficient(v, 0.0) / (8.0 * kPi);
}

CutoffRule proportional_cutoff(double factor) {
  return [factor](int N) { return factor * double(N) * kTwoPi; };
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = double(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ConvergenceStudy convergence_study(const PotentialSpec& v, std::span<const int> N_list,
                                   const CutoffRule& cutoff_rule, const LinearSolveOptions& options) {
  ConvergenceStudy study;
  study.a_ode = radial_ode_scattering_length(v);
  std::vector<double> ns, errs;
  for (int N : N_list) {
    ConvergenceRow row;
    row.N = N;
    row.cutoff = cutoff_rule(N);
    row.a_ode = study.a_ode;
    try {
      std::vector<std::string> warnings;
      auto set = std::make_shared<const MomentumSet>(build_momentum_set(row.cutoff, &warnings));
      row.momenta = set->size();
      if (set->empty()) throw std::invalid_argument(warnings.empty() ? "empty momentum set" : warnings.front());
      const auto sol = solve_lattice_scattering(v, N, set, options);
      row.a_lattice = lattice_scattering_length(sol, v);
      row.abs_err = std::abs(row.a_lattice - row.a_ode);
      row.iterations = sol.iterations;
      row.residual = sol.residual_norm;
      ns.push_back(N);
      errs.push_back(row.abs_err);
    } catch (const std::exception& ex) {
      row.ok = false;
      row.error = ex.what();
      row.a_lattice = std::nan("");
      row.abs_err = std::nan("");
    }
    study.rows.push_back(std::move(row));
  }
  study.slope = loglog_slope(ns, errs);
  return study;
}

PhiNormReport PhiNormReport::per_kappa() const {
  PhiNormReport r = *this;
  const double s = kappa > 0.0 ? 1.0 / kappa : 0.0;
  r.sup_abs *= s;
  r.l2 *= s;
  r.weighted_l1 *= s;
  r.sup_p2 *= s;
  return r;
}

PhiNormReport phi_norm_report(const ScatteringSolution& sol) {
  PhiNormReport rep;
  rep.kappa = sol.kappa;
  const auto& set = *sol.momenta;
  const detail::KernelTable table(sol.potential, sol.N, 3L * set.extent() * set.extent());
  double l2 = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double f = sol.phi[i];
    rep.sup_abs = std::max(rep.sup_abs, std::abs(f));
    l2 += f * f;
    rep.weighted_l1 += std::abs(table(set[i]) * f);
    rep.sup_p2 = std::max(rep.sup_p2, std::abs(set[i].momentum_norm2() * f));
  }
  rep.l2 = std::sqrt(l2);
  rep.weighted_l1 /= sol.N;
  return rep;
}

}  // namespace gpbec
