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

#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "gpbec/errors.hpp"
#include "gpbec/scattering.hpp"

using namespace gpbec;

namespace {

std::shared_ptr<const MomentumSet> shell(double c) {
  return std::make_shared<const MomentumSet>(build_momentum_set(c * kTwoPi));
}

std::shared_ptr<const MomentumSet> two_modes() {
  return std::make_shared<const MomentumSet>(momentum_set_from_points({{0, 0, 1}, {0, 0, -1}}));
}

// a for a uniform ball from the zero-energy radial equation u'' = (kappa h / 2) u.
double ball_length(const PotentialSpec& v) {
  const double q = std::sqrt(0.5 * v.kappa * v.height);
  if (q == 0.0) return 0.0;
  return v.radius - std::tanh(q * v.radius) / q;
}

// Second-order Born value for the uniform ball.
double ball_second_born(const PotentialSpec& v) {
  const double w = 0.5 * v.kappa * v.height;
  const double R = v.radius;
  const double first = w * 4.0 * kPi / 3.0 * R * R * R;
  const double second = w * w * 8.0 * kPi / 15.0 * std::pow(R, 5);
  return (first - second) / (4.0 * kPi);
}

}  // namespace

TEST_CASE("two-mode closed form") {
  for (double kappa : {0.05, 0.5, 3.0}) {
    PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, kappa};
    const int N = 3;
    const auto sol = solve_lattice_scattering(v, N, two_modes());
    const double s = kTwoPi;
    const double d = s * s + kappa / (2.0 * N) * (fourier_coefficient(v, 0.0) + fourier_coefficient(v, 2 * s / N));
    const double expect = -0.5 * kappa * fourier_coefficient(v, s / N) / d;
    CHECK(sol.phi[0] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(sol.phi[1] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(sol.evenness_error <= 1e-15);
  }
}

TEST_CASE("kappa zero gives the zero solution") {
  PotentialSpec v;
  for (auto b : {ScatteringBackend::dense, ScatteringBackend::fft_cg}) {
    LinearSolveOptions o;
    o.backend = b;
    const auto sol = solve_lattice_scattering(v, 5, shell(2.0), o);
    for (double x : sol.phi) CHECK(x == 0.0);
    CHECK(lattice_scattering_length(sol, v) == 0.0);
    CHECK(sol.sign_violations == 0);
  }
}

TEST_CASE("dense and fft backends agree and satisfy the equation") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.1};
  const int N = 10;
  const auto set = shell(6.0);
  LinearSolveOptions dense, fft;
  dense.backend = ScatteringBackend::dense;
  fft.backend = ScatteringBackend::fft_cg;
  const auto a = solve_lattice_scattering(v, N, set, dense);
  const auto b = solve_lattice_scattering(v, N, set, fft);
  REQUIRE(a.phi.size() == b.phi.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.phi.size(); ++i) m = std::max(m, std::abs(a.phi[i] - b.phi[i]));
  CHECK(m <= 1e-9);
  CHECK(direct_residual(v, N, *set, a.phi) <= 1e-10);
  CHECK(direct_residual(v, N, *set, b.phi) <= 1e-10);
  CHECK(b.residual_norm <= 1e-10);
  CHECK(b.backend == ScatteringBackend::fft_cg);
  CHECK(a.evenness_error <= 1e-14);
}

TEST_CASE("position-space solve matches the momentum solve") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 2.0};
  const int N = 8;
  const auto set = shell(4.0);
  LinearSolveOptions dense;
  dense.backend = ScatteringBackend::dense;
  const auto ref = solve_lattice_scattering(v, N, set, dense);
  auto err = [&](int G) {
    const auto s = solve_position_space(v, N, set, G);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ref.phi.size(); ++i) {
      num += (s.phi[i] - ref.phi[i]) * (s.phi[i] - ref.phi[i]);
      den += ref.phi[i] * ref.phi[i];
    }
    return std::sqrt(num / den);
  };
  const double e9 = err(9), e10 = err(10), e16 = err(16);
  CHECK(e10 < e9);
  CHECK(e16 <= 1e-10);
  CHECK(err(20) <= 1e-10);
  CHECK_THROWS_AS(solve_position_space(v, N, set, 8), std::invalid_argument);
}

TEST_CASE("sign diagnostics count nonnegative entries") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.1};
  const auto sol = solve_lattice_scattering(v, 4, shell(6.0));
  std::size_t count = 0;
  for (double x : sol.phi) count += x >= 0.0;
  CHECK(sol.sign_violations == count);
  // The first shell sits where the transform is positive.
  for (std::size_t i = 0; i < sol.momenta->size(); ++i)
    if ((*sol.momenta)[i].norm2_int() == 1) CHECK(sol.phi[i] < 0.0);
  // The correction to the first Born value is negative.
  CHECK(lattice_scattering_length(sol, v) < first_born_scattering_length(v));
  CHECK(sol.at({0, 0, 1}) == sol.phi[*sol.momenta->index_of({0, 0, 1})]);
  CHECK_THROWS(sol.at({0, 0, 0}));
}

TEST_CASE("lattice length lies between second and first Born values") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.1};
  const int N = 20;
  const auto sol = solve_lattice_scattering(v, N, shell(double(N)));
  const double aN = lattice_scattering_length(sol, v);
  CHECK(aN < first_born_scattering_length(v));
  CHECK(aN > ball_second_born(v));
  CHECK_THROWS_AS(lattice_scattering_length(sol, v.with_kappa(0.2)), std::invalid_argument);
}

TEST_CASE("radial ODE against the closed form for the ball") {
  for (double kappa : {0.0, 0.2, 2.0, 8.0, 50.0}) {
    PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, kappa};
    CHECK(std::abs(radial_ode_scattering_length(v) - ball_length(v)) <= 1e-7);
  }
  PotentialSpec r2{Profile::uniform_ball, 2.0, 0.5, 1.0};
  CHECK(std::abs(radial_ode_scattering_length(r2) - ball_length(r2)) <= 1e-7);
  CHECK(radial_ode_scattering_length(PotentialSpec{}.with_kappa(2.0)) ==
        doctest::Approx(1.0 - std::tanh(1.0)).epsilon(1e-7));
}

TEST_CASE("hard-core trend") {
  double prev = 0.0;
  for (double kappa : {10.0, 100.0, 1000.0}) {
    const double a = radial_ode_scattering_length(PotentialSpec{}.with_kappa(kappa));
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("Born resolvent against the ODE") {
  for (Profile prof : {Profile::uniform_ball, Profile::soft_radial})
    for (double kappa : {0.0, 0.2, 1.0, 2.0}) {
      PotentialSpec v{prof, 1.0, 1.0, kappa};
      INFO(to_string(prof), " kappa=", kappa);
      CHECK(std::abs(born_resolvent_scattering_length(v) - radial_ode_scattering_length(v)) <= 1e-6);
    }
}

TEST_CASE("Born spectral radius and divergence") {
  PotentialSpec v = PotentialSpec{}.with_kappa(2.0);
  CHECK(born_spectral_radius(v) == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-4));
  CHECK(born_spectral_radius(v.with_kappa(1.0)) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-4));
  CHECK_THROWS_AS(born_resolvent_scattering_length(v.with_kappa(6.0)), BornDivergence);
  try {
    born_resolvent_scattering_length(v.with_kappa(6.0));
  } catch (const BornDivergence& e) {
    CHECK(e.spectral_radius() >= 1.0);
  }
}

TEST_CASE("first Born value") {
  CHECK(first_born_scattering_length(PotentialSpec{}.with_kappa(0.6)) == doctest::Approx(0.6 / 6.0));
}

TEST_CASE("loglog slope") {
  const std::vector<double> x{2.0, 4.0, 8.0};
  const std::vector<double> y{1.0, 0.5, 0.25};
  CHECK(*loglog_slope(x, y) == doctest::Approx(-1.0).epsilon(1e-14));
  const std::vector<double> x1{2.0}, y1{1.0};
  CHECK_FALSE(loglog_slope(x1, y1).has_value());
}

TEST_CASE("convergence study at small sizes") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.1};
  const std::vector<int> Ns{6, 12};
  const auto st = convergence_study(v, Ns, proportional_cutoff(2.0));
  REQUIRE(st.rows.size() == 2);
  CHECK(st.rows[1].abs_err < st.rows[0].abs_err);
  CHECK(st.rows[0].cutoff == doctest::Approx(12.0 * kTwoPi));
  CHECK(st.slope.has_value());
  const auto zero = convergence_study(v.with_kappa(0.0), Ns, proportional_cutoff(2.0));
  for (const auto& r : zero.rows) CHECK(r.abs_err == 0.0);
  CHECK_FALSE(zero.slope.has_value());
}

TEST_CASE("norm report scales linearly in kappa") {
  const int N = 8;
  const auto set = shell(2.0 * N);
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.02};
  const auto a = phi_norm_report(solve_lattice_scattering(v, N, set)).per_kappa();
  const auto b = phi_norm_report(solve_lattice_scattering(v.with_kappa(0.01), N, set)).per_kappa();
  CHECK(a.sup_abs == doctest::Approx(b.sup_abs).epsilon(0.01));
  CHECK(a.l2 == doctest::Approx(b.l2).epsilon(0.01));
  CHECK(a.sup_p2 == doctest::Approx(b.sup_p2).epsilon(0.01));
  const auto z = phi_norm_report(solve_lattice_scattering(v.with_kappa(0.0), N, set));
  CHECK(z.sup_abs == 0.0);
  CHECK(z.per_kappa().l2 == 0.0);
}

TEST_CASE("sup |p^2 phi| / kappa stays bounded in N") {
  PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.05};
  double lo = 1e300, hi = 0.0;
  for (int N : {8, 16, 32}) {
    const auto r = phi_norm_report(solve_lattice_scattering(v, N, shell(2.0 * N))).per_kappa();
    lo = std::min(lo, r.sup_p2);
    hi = std::max(hi, r.sup_p2);
    CHECK(std::isfinite(r.weighted_l1));
  }
  CHECK(hi / lo <= 1.5);
  CHECK(hi <= 0.5 * fourier_coefficient(v, 0.0) * 1.01);
}

TEST_CASE("backend names") {
  CHECK(parse_backend("fft_cg") == ScatteringBackend::fft_cg);
  CHECK(to_string(ScatteringBackend::dense) == "dense");
  CHECK_THROWS(parse_backend("magic"));
}

TEST_CASE("fixed N, growing cutoff gives Cauchy lengths") {
  const PotentialSpec v{Profile::uniform_ball, 1.0, 1.0, 0.1};
  const int N = 8;
  std::vector<double> a;
  for (double c : {0.5, 1.0, 2.0, 4.0})
    a.push_back(lattice_scattering_length(solve_lattice_scattering(v, N, shell(c * N)), v));
  for (std::size_t k = 2; k < a.size(); ++k) CHECK(std::abs(a[k] - a[k - 1]) < std::abs(a[k - 1] - a[k - 2]));
}
