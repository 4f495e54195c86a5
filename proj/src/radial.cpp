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

// Continuum references for the scattering length of a radial potential.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "gpbec/errors.hpp"
#include "gpbec/scattering.hpp"

namespace gpbec {

namespace {

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch on [0, R].
Quadrature gauss_legendre(int n, double R) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    q.nodes(i) = 0.5 * R * (es.eigenvalues()(i) + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    q.weights(i) = R * v0 * v0;
  }
  return q;
}

// Clenshaw-Curtis weights for the points cos(j pi / n), j = 0..n, on [-1, 1].
Eigen::VectorXd clenshaw_curtis(int n) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double theta = j * kPi / n;
    double s = 1.0;
    for (int k = 1; k <= n / 2; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      s -= b * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    const double c = (j == 0 || j == n) ? 1.0 : 2.0;
    w(j) = c * s / n;
  }
  return w;
}

// Chebyshev differentiation matrix for the points cos(j pi / n).
Eigen::MatrixXd cheb_diff(int n, const Eigen::VectorXd& x) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto c = [n](int i) { return ((i == 0 || i == n) ? 2.0 : 1.0) * ((i % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j) D(i, j) = c(i) / c(j) / (x(i) - x(j));
  for (int i = 0; i <= n; ++i) D(i, i) = -D.row(i).sum();
  return D;
}

}  // namespace

double born_spectral_radius(const PotentialSpec& v, const RadialGrid& grid) {
  v.validate();
  if (grid.nystrom_nodes < 2) throw std::invalid_argument("need at least two Nystrom nodes");
  const int n = grid.nystrom_nodes;
  const auto q = gauss_legendre(n, v.radius);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i)
    s(i) = std::sqrt(q.weights(i) * 0.5 * v.kappa * position_value(v, q.nodes(i)));
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = s(i) * std::min(q.nodes(i), q.nodes(j)) * s(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double born_resolvent_scattering_length(const PotentialSpec& v, const RadialGrid& grid) {
  v.validate();
  const double rho = born_spectral_radius(v, grid);
  if (rho >= 1.0)
    throw BornDivergence("Born series diverges: spectral radius " + std::to_string(rho), rho);

  const int n = grid.collocation_nodes;
  if (n < 4) throw std::invalid_argument("need at least four collocation nodes");
  const double R = v.radius;
  Eigen::VectorXd x(n + 1), r(n + 1), pot(n + 1);
  for (int j = 0; j <= n; ++j) {
    x(j) = std::cos(j * kPi / n);
    r(j) = 0.5 * R * (x(j) + 1.0);
    pot(j) = 0.5 * v.kappa * position_value(v, r(j));
  }
  const Eigen::MatrixXd D = cheb_diff(n, x) * (2.0 / R);
  Eigen::MatrixXd A = -D * D;
  A.diagonal() += pot;
  Eigen::VectorXd rhs = r.cwiseProduct(pot);
  // u'(R) = 0 at node 0, u(0) = 0 at node n.
  A.row(0) = D.row(0);
  rhs(0) = 0.0;
  A.row(n).setZero();
  A(n, n) = 1.0;
  rhs(n) = 0.0;
  const Eigen::VectorXd u = A.partialPivLu().solve(rhs);

  const Eigen::VectorXd w = clenshaw_curtis(n) * (0.5 * R);
  double a = 0.0;
  for (int j = 0; j <= n; ++j) a += w(j) * r(j) * pot(j) * (r(j) - u(j));
  return a;
}

double radial_ode_scattering_length(const PotentialSpec& v, int steps) {
  v.validate();
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (v.kappa == 0.0) return 0.0;
  const double R = v.radius;
  const double h = R / steps;
  // The support is closed, so the ball's jump at R is never sampled.
  auto f = [&](double r) { return 0.5 * v.kappa * position_value(v, std::min(r, R)); };
  double u = 0.0, du = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1u = du, k1d = f(r) * u;
    const double k2u = du + 0.5 * h * k1d, k2d = f(r + 0.5 * h) * (u + 0.5 * h * k1u);
    const double k3u = du + 0.5 * h * k2d, k3d = f(r + 0.5 * h) * (u + 0.5 * h * k2u);
    const double k4u = du + h * k3d, k4d = f(r + h) * (u + h * k3u);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
  return R - u / du;
}

}  // namespace gpbec
