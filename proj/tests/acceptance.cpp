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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "gpbec/bogoliubov.hpp"
#include "gpbec/commands.hpp"
#include "gpbec/config.hpp"
#include "gpbec/errors.hpp"
#include "gpbec/operators.hpp"
#include "gpbec/scattering.hpp"
#include "gpbec/spectra.hpp"

using namespace gpbec;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOdeTol = 1e-7;
constexpr double kBornTol = 1e-6;
constexpr double kSlopeLo = -1.3, kSlopeHi = -0.7;
constexpr double kBackendTol = 1e-9;
constexpr double kTwoModeTol = 1e-12;
constexpr double kAlgebraTol = 1e-13;
constexpr double kCommutatorTol = 1e-10;
constexpr double kRefinementFloor = 1e-12;
constexpr double kEigenTol = 1e-9;
constexpr double kCondensateFraction = 0.9;
constexpr double kDriftTol = 1e-10;
constexpr double kGrowthStability = 0.05;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::shared_ptr<const MomentumSet> shell(double c) {
  return std::make_shared<const MomentumSet>(build_momentum_set(c * kTwoPi));
}

std::shared_ptr<const MomentumSet> two_modes() {
  return std::make_shared<const MomentumSet>(momentum_set_from_points({{0, 0, 1}, {0, 0, -1}}));
}

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

const PotentialSpec kBall{Profile::uniform_ball, 1.0, 1.0, 0.0};

void c1(Outcome& o) {
  const double ode = radial_ode_scattering_length(kBall.with_kappa(2.0));
  const double err = std::abs(ode - (1.0 - std::tanh(1.0)));
  const double born = born_resolvent_scattering_length(kBall.with_kappa(0.2));
  const double ode2 = radial_ode_scattering_length(kBall.with_kappa(0.2));
  o.detail << "a_ode(kappa=2)=" << format_double(ode) << " err=" << fmt(err) << " |a_born-a_ode|(kappa=0.2)="
           << fmt(std::abs(born - ode2));
  o.require(err <= kOdeTol, "ode vs 1-tanh(1) <= 1e-7");
  o.require(std::abs(born - ode2) <= kBornTol, "born vs ode <= 1e-6");
}

void c2(Outcome& o) {
  const std::vector<int> Ns{8, 16, 32};
  const auto st = convergence_study(kBall.with_kappa(0.1), Ns, proportional_cutoff(4.0));
  for (const auto& r : st.rows) {
    o.detail << "N=" << r.N << " err=" << fmt(r.abs_err) << " ";
    o.require(r.ok, "row N=" + std::to_string(r.N) + " solved");
  }
  o.require(st.slope.has_value(), "slope defined");
  if (st.slope) {
    o.detail << "slope=" << format_double(*st.slope);
    o.require(*st.slope >= kSlopeLo && *st.slope <= kSlopeHi, "slope in [-1.3, -0.7]");
  }
}

void c3(Outcome& o) {
  const PotentialSpec v = kBall.with_kappa(0.1);
  const auto set = shell(6.0);
  LinearSolveOptions dense, fft;
  dense.backend = ScatteringBackend::dense;
  fft.backend = ScatteringBackend::fft_cg;
  const auto a = solve_lattice_scattering(v, 10, set, dense);
  const auto b = solve_lattice_scattering(v, 10, set, fft);
  double linf = 0.0;
  for (std::size_t i = 0; i < a.phi.size(); ++i) linf = std::max(linf, std::abs(a.phi[i] - b.phi[i]));
  o.detail << "|S|=" << set->size() << " dense-vs-fft linf=" << fmt(linf);
  o.require(linf <= kBackendTol, "backend agreement <= 1e-9");

  double worst = 0.0;
  for (double kappa : {0.1, 1.0}) {
    const int N = 4;
    const PotentialSpec w = kBall.with_kappa(kappa);
    const auto sol = solve_lattice_scattering(w, N, two_modes());
    const double s = kTwoPi;
    const double d = s * s + kappa / (2.0 * N) * (fourier_coefficient(w, 0.0) + fourier_coefficient(w, 2.0 * s / N));
    const double exact = -0.5 * kappa * fourier_coefficient(w, s / N) / d;
    for (double x : sol.phi) worst = std::max(worst, std::abs(x - exact) / std::abs(exact));
  }
  o.detail << " two-mode rel err=" << fmt(worst);
  o.require(worst <= kTwoModeTol, "two-mode closed form <= 1e-12");
}

void c4(Outcome& o) {
  const auto set = shell(std::sqrt(3.0));
  const PotentialSpec v = kBall.with_kappa(0.1);
  const int N = 6;
  const AssemblyParams params{v, N, eight_pi_a(v, N, set), nullptr};
  o.require(set->size() + 1 == 27, "27 modes");

  const auto range = enumerate_basis_range(set, 0, 6);
  const auto H = assemble(OperatorTag::Hmu, range, params);
  const auto Nt = assemble(OperatorTag::Ntotal, range, params);
  const double hn = max_abs(commutator(H, Nt).matrix);
  double hp = 0.0;
  for (int axis = 0; axis < 3; ++axis) hp = std::max(hp, max_abs(commutator(H, total_momentum_operator(range, axis)).matrix));
  // All total momenta, n <= 4.
  const auto open = enumerate_basis_range(set, 0, 4, std::nullopt);
  const auto Ho = assemble(OperatorTag::Hmu, open, params);
  double hp_open = 0.0;
  for (int axis = 0; axis < 3; ++axis)
    hp_open = std::max(hp_open, max_abs(commutator(Ho, total_momentum_operator(open, axis)).matrix));
  const double hn_open = max_abs(commutator(Ho, assemble(OperatorTag::Ntotal, open, params)).matrix);

  double decomp = 0.0, ulps = 0.0, scale = 0.0;
  for (int n = 0; n <= 6; ++n) {
    const auto b = enumerate_basis(set, n);
    SparseMatrix sum = assemble(OperatorTag::H0, b, params).matrix;
    for (auto t : {OperatorTag::H1, OperatorTag::H2, OperatorTag::Q2, OperatorTag::Q3, OperatorTag::Q4})
      sum += assemble(t, b, params).matrix;
    const SparseMatrix h = assemble(OperatorTag::Hmu, b, params).matrix;
    const SparseMatrix d = sum - h;
    for (Eigen::Index k = 0; k < d.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
        const double ref = std::abs(h.coeff(it.row(), it.col()));
        const double ulp = std::nextafter(ref, INFINITY) - ref;
        decomp = std::max(decomp, std::abs(it.value()));
        ulps = std::max(ulps, std::abs(it.value()) / ulp);
        scale = std::max(scale, ref);
      }
  }
  const double numbers = max_abs(SparseMatrix(assemble(OperatorTag::Nzero, range, params).matrix +
                                              assemble(OperatorTag::Nplus, range, params).matrix - Nt.matrix));
  o.detail << "dim(P=0,n<=6)=" << range.dim() << " dim(all P,n<=4)=" << open.dim() << " [H,N]=" << fmt(std::max(hn, hn_open))
           << " [H,P]=" << fmt(std::max(hp, hp_open)) << " decomposition=" << fmt(decomp) << " (" << ulps << " ulp, max |H entry|=" << fmt(scale) << ")"
           << " N0+N+-N=" << fmt(numbers);
  o.require(std::max(hn, hn_open) <= kAlgebraTol, "[H,N] <= 1e-13");
  o.require(std::max(hp, hp_open) <= kAlgebraTol, "[H,P] <= 1e-13");
  o.require(decomp <= kAlgebraTol, "decomposition <= 1e-13");
  o.require(numbers == 0.0, "N0 + N+ = N exactly");
}

void c5(Outcome& o) {
  const int N = 6;
  const PotentialSpec v = kBall.with_kappa(0.1);
  const auto set = two_modes();
  const auto phi = solve_lattice_scattering(v, N, set);
  double two = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const auto rep = commutator_identity_residual(enumerate_basis(set, n), v, N, phi, set->cutoff());
    two = std::max(two, rep.restricted_norm);
  }
  o.detail << "two-mode ||PiRPi||=" << fmt(two);
  o.require(two <= kCommutatorTol, "two-mode residual <= 1e-10");

  const auto levels = commutator_refinement(v, N, 3, kTwoPi, 2);
  o.detail << " refinement";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    o.detail << " " << fmt(levels[k].restricted_norm) << "(dim " << levels[k].dim << ")";
    if (k > 0)
      o.require(levels[k].restricted_norm <= std::max(levels[k - 1].restricted_norm, kRefinementFloor),
                "non-increasing under cutoff doubling");
  }

  const PotentialSpec free = kBall;
  const auto phi0 = solve_lattice_scattering(free, N, set);
  const auto z2 = commutator_identity_residual(enumerate_basis(set, 4), free, N, phi0, set->cutoff());
  const auto zr = commutator_refinement(free, N, 3, kTwoPi, 1);
  double zero = std::max(z2.full_norm, z2.max_entry);
  for (const auto& r : zr) zero = std::max({zero, r.full_norm, r.max_entry});
  o.detail << " kappa=0 residual=" << fmt(zero);
  o.require(zero == 0.0, "exactly 0 at kappa=0");
}

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 4.0 * u(rng);
    for (int k = 0; k < 4; ++k) {
      const int j = col(rng);
      const double x = u(rng);
      m(i, j) += x;
      m(j, i) += x;
    }
  }
  return m;
}

void c6(Outcome& o) {
  EigenOptions lanczos;
  lanczos.dense_limit = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SparseHermitianOperator op{"random", Symmetry::symmetric, random_symmetric(500, seed).sparseView()};
    worst = std::max(worst, std::abs(ground_state(op, lanczos).energy - dense_ground_state(op).energy));
  }
  o.detail << "random dim-500 max diff=" << fmt(worst);
  o.require(worst <= kEigenTol, "random instances <= 1e-9");

  int sectors = 0;
  double sector_worst = 0.0;
  auto sweep = [&](std::shared_ptr<const MomentumSet> set, int n_max, double kappa) {
    const PotentialSpec v = kBall.with_kappa(kappa);
    const AssemblyParams params{v, 6, eight_pi_a(v, 6, set), nullptr};
    for (int n = 0; n <= n_max; ++n) {
      const auto b = enumerate_basis(set, n);
      if (b.dim() > 2000) continue;
      const auto H = assemble(OperatorTag::Hmu, b, params);
      sector_worst = std::max(sector_worst, std::abs(ground_state(H, lanczos).energy - dense_ground_state(H).energy));
      ++sectors;
    }
  };
  sweep(shell(1.0), 12, 0.05);
  sweep(shell(std::sqrt(3.0)), 6, 0.1);
  o.detail << " sectors=" << sectors << " max diff=" << fmt(sector_worst);
  o.require(sector_worst <= kEigenTol, "every sector with dim <= 2000 agrees to 1e-9");
}

void c7(Outcome& o) {
  const auto set = shell(1.0);
  const int N = 6;
  std::vector<double> gaps;
  for (double kappa : {0.2, 0.1, 0.05}) {
    const PotentialSpec v = kBall.with_kappa(kappa);
    const auto rep = trial_energy(v, N, eight_pi_a(v, N, set), solve_lattice_scattering(v, N, set));
    gaps.push_back(*rep.gap());
    o.detail << "gap(" << kappa << ")=" << fmt(*rep.gap()) << " ";
    o.require(*rep.gap() >= 0.0, "trial >= exact");
  }
  o.require(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gap decreases with kappa");

  // Further instances: the two-mode set and the 27-mode set.
  for (auto other : {two_modes(), shell(std::sqrt(3.0))}) {
    const PotentialSpec v = kBall.with_kappa(0.1);
    const auto rep = trial_energy(v, N, eight_pi_a(v, N, other), solve_lattice_scattering(v, N, other));
    o.detail << "gap(" << other->size() << " modes)=" << fmt(*rep.gap()) << " ";
    o.require(*rep.gap() >= 0.0, "trial >= exact");
  }

  const double mu = 1.5;
  const auto free = trial_energy(kBall, N, mu, solve_lattice_scattering(kBall, N, set));
  o.detail << "kappa=0 trial=" << format_double(free.trial_energy) << " exact=" << format_double(*free.exact_energy);
  o.require(free.trial_energy == -mu * N && *free.exact_energy == -mu * N, "kappa=0 both equal -mu N exactly");
}

void c8(Outcome& o) {
  const auto set = shell(1.0);
  const int N = 6;
  std::vector<double> dep;
  for (double kappa : {0.05, 0.1, 0.2}) {
    const auto scan = grand_canonical_scan(kBall.with_kappa(kappa), N, set, N, N);
    const auto& r = scan.rows.at(0);
    dep.push_back(r.depletion);
    o.detail << "kappa=" << kappa << " depletion=" << fmt(r.depletion) << " ";
    if (kappa == 0.05) {
      o.detail << "condensate=" << format_double(r.condensate_occupation) << " ";
      o.require(r.condensate_occupation > kCondensateFraction * N, "condensate > 0.9 n");
    }
  }
  o.require(dep[0] < dep[1] && dep[1] < dep[2], "depletion increases with kappa");
}

void c9(Outcome& o) {
  const auto set = shell(1.0);
  const int N = 6;
  const PotentialSpec v = kBall.with_kappa(0.1);
  const auto phi = solve_lattice_scattering(v, N, set);
  const auto basis = enumerate_basis(set, N);
  const std::vector<double> grid{-1.0, -0.5, 0.5, 1.0};
  const std::uint64_t seed = 7;
  const auto a = nplus_growth_check(basis, phi, N, grid, 200, seed);
  const auto b = nplus_growth_check(basis, phi, N, grid, 400, seed);
  const double drift = std::max(a.max_norm_drift, b.max_norm_drift);
  o.detail << "drift=" << fmt(drift);
  o.require(drift <= kDriftTol, "norm drift <= 1e-10");
  for (std::size_t k = 0; k < 3; ++k) {
    const double change = std::abs(b.max_ratio[k] - a.max_ratio[k]) / a.max_ratio[k];
    o.detail << " k=" << k + 1 << ": " << format_double(a.max_ratio[k]) << "->" << format_double(b.max_ratio[k]);
    o.require(std::isfinite(b.max_ratio[k]) && change <= kGrowthStability, "growth stable within 5%");
  }
}

std::map<std::string, std::string> read_outputs(const CommandResult& r) {
  std::map<std::string, std::string> out;
  for (const auto& f : r.files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[f.filename().string()] = ss.str();
  }
  return out;
}

void c10(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / ("gpbec_acceptance_" + std::to_string(::getpid()));
  const std::vector<std::pair<Command, std::string>> runs{{Command::scattering, "scattering.cfg"},
                                                          {Command::convergence, "convergence.cfg"},
                                                          {Command::ed, "ed.cfg"},
                                                          {Command::trial, "trial.cfg"},
                                                          {Command::identity, "identity.cfg"}};
  for (const auto& [cmd, file] : runs) {
    RunConfig c = load_config(fs::path(GPBEC_CONFIG_DIR) / file);
    c.output_dir = root / "a" / to_string(cmd);
    const auto first = read_outputs(run_command(cmd, c));
    const auto again = read_outputs(run_command(cmd, c));
    c.output_dir = root / "b" / to_string(cmd);
    const auto moved = read_outputs(run_command(cmd, c));
    bool same = first == again;
    int csvs = 0;
    for (const auto& [name, bytes] : first)
      if (name.ends_with(".csv")) {
        ++csvs;
        same = same && moved.count(name) && moved.at(name) == bytes;
      }
    const auto manifest = nlohmann::json::parse(first.at("manifest.json"));
    bool full = manifest.contains("config") && manifest["config"].size() == config_keys().size();
    c.output_dir = root / "a" / to_string(cmd);
    for (const auto& [k, val] : c.resolved()) full = full && manifest["config"].contains(k) && manifest["config"][k] == val;
    o.detail << to_string(cmd) << "(" << csvs << " csv) ";
    o.require(same, to_string(cmd) + " byte-identical");
    o.require(full, to_string(cmd) + " manifest embeds the full config");
  }
  fs::remove_all(root);
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"scattering-length oracle triangle", c1},
      {"convergence rate", c2},
      {"solver backend equivalence", c3},
      {"operator algebra", c4},
      {"commutator identity", c5},
      {"eigensolver correctness", c6},
      {"variational dominance and kappa -> 0", c7},
      {"condensate structure", c8},
      {"unitarity and growth", c9},
      {"reproducibility", c10}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail << " [exception: " << ex.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("[%s] criterion %zu: %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
