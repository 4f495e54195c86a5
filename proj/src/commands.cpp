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

#include "gpbec/commands.hpp"

#include <json.hpp>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gpbec/bogoliubov.hpp"
#include "gpbec/errors.hpp"
#include "gpbec/scattering.hpp"
#include "gpbec/spectra.hpp"

namespace gpbec {

using json = nlohmann::ordered_json;

namespace {

constexpr double kRefinementFloor = 1e-12;
constexpr double kGrowthStability = 0.05;
constexpr double kNplusCommutatorTol = 1e-12;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <typename T>
json optional_number(const std::optional<T>& x) {
  return x ? number(double(*x)) : json(nullptr);
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string s;
  for (const auto& f : fields) {
    if (!s.empty()) s += ',';
    s += f;
  }
  return s + '\n';
}

class Writer {
 public:
  explicit Writer(const RunConfig& c) : config_(c) {
    std::error_code ec;
    std::filesystem::create_directories(c.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + c.output_dir.string() + ": " + ec.message());
  }

  void csv(const std::string& name, const std::string& content) {
    if (config_.write_csv) put(name, content);
  }
  void json_file(const std::string& name, const json& j) {
    if (config_.write_json) put(name, j.dump(2) + "\n");
  }
  void manifest(Command cmd) {
    json m;
    m["artifact"] = "gpbec";
    m["version"] = GPBEC_VERSION;
    m["command"] = to_string(cmd);
    json cfg = json::object();
    for (const auto& [k, v] : config_.resolved()) cfg[k] = v;
    m["config"] = cfg;
    m["tolerances"] = {{"linear", config_.tol_linear},
                       {"eigen", config_.tol_eigen},
                       {"unitary", config_.tol_unitary},
                       {"refinement_floor", kRefinementFloor},
                       {"growth_stability", kGrowthStability},
                       {"nplus_commutator", kNplusCommutatorTol}};
    m["seed"] = config_.rng_seed;
    m["status"] = result.numerical_failure ? "numerical_failure" : "ok";
    if (!result.message.empty()) m["message"] = result.message;
    json outs = json::array();
    for (const auto& f : result.files) outs.push_back(f.filename().string());
    m["outputs"] = outs;
    put("manifest.json", m.dump(2) + "\n");
  }

  CommandResult result;

 private:
  void put(const std::string& name, const std::string& content) {
    const auto path = config_.output_dir / name;
    write_file_atomic(path, content);
    result.files.push_back(path);
  }
  const RunConfig& config_;
};

int require_N(const RunConfig& c) {
  if (!c.N) throw ConfigError("gp.N is required for this command");
  return *c.N;
}

LinearSolveOptions linear_options(const RunConfig& c) {
  LinearSolveOptions o;
  o.tol = c.tol_linear;
  o.backend = c.backend;
  return o;
}

EigenOptions eigen_options(const RunConfig& c) {
  EigenOptions o;
  o.tol = c.tol_eigen;
  o.seed = c.rng_seed;
  return o;
}

std::shared_ptr<const MomentumSet> fock_modes(const RunConfig& c) {
  return std::make_shared<const MomentumSet>(build_momentum_set(c.mode_cutoff * kTwoPi));
}

double resolve_mu(const RunConfig& c, const PotentialSpec& v, int N, const std::shared_ptr<const MomentumSet>& set) {
  if (c.mu_mode == MuMode::explicit_value) return *c.mu_value;
  return eight_pi_a(v, N, set, linear_options(c));
}

json potential_json(const PotentialSpec& v) {
  return {{"profile", to_string(v.profile)}, {"radius", v.radius}, {"height", v.height}, {"kappa", v.kappa}};
}

void cmd_scattering(const RunConfig& c, Writer& w) {
  const int N = require_N(c);
  const auto& v = c.potential;
  const double cutoff = c.cutoff_factor * N * kTwoPi;
  std::vector<std::string> warnings;
  auto set = std::make_shared<const MomentumSet>(build_momentum_set(cutoff, &warnings));

  json j;
  j["potential"] = potential_json(v);
  j["N"] = N;
  j["cutoff"] = cutoff;
  j["momenta"] = set->size();
  j["warnings"] = warnings;
  j["a_first_born"] = first_born_scattering_length(v);
  j["a_ode"] = radial_ode_scattering_length(v);
  try {
    j["a_born"] = born_resolvent_scattering_length(v);
  } catch (const BornDivergence& ex) {
    j["a_born"] = nullptr;
    j["born_status"] = ex.what();
  }

  if (set->empty()) {
    j["status"] = "ok";
    j["a_lattice"] = j["a_first_born"];
    w.json_file("scattering.json", j);
    w.csv("phi.csv", csv_line({"px", "py", "pz", "phi"}));
    return;
  }

  ScatteringSolution sol;
  try {
    sol = solve_lattice_scattering(v, N, set, linear_options(c));
  } catch (const NumericalError& ex) {
    j["status"] = "failed";
    j["partial"] = true;
    j["error"] = ex.what();
    if (auto* nc = dynamic_cast<const NonConvergence*>(&ex)) {
      j["residual"] = nc->residual();
      j["iterations"] = nc->iterations();
    }
    w.json_file("scattering.json", j);
    w.result.numerical_failure = true;
    w.result.message = ex.what();
    return;
  }

  j["status"] = "ok";
  j["a_lattice"] = lattice_scattering_length(sol, v);
  j["solver"] = {{"backend", to_string(sol.backend)},
                 {"iterations", sol.iterations},
                 {"residual", sol.residual_norm},
                 {"tol", sol.tol}};
  j["sign_violations"] = sol.sign_violations;
  j["evenness_error"] = sol.evenness_error;
  const auto norms = phi_norm_report(sol);
  const auto per = norms.per_kappa();
  j["phi_norms"] = {{"sup_abs", norms.sup_abs},
                    {"l2", norms.l2},
                    {"weighted_l1", norms.weighted_l1},
                    {"sup_p2", norms.sup_p2}};
  j["phi_norms_per_kappa"] = {
      {"sup_abs", per.sup_abs}, {"l2", per.l2}, {"weighted_l1", per.weighted_l1}, {"sup_p2", per.sup_p2}};
  w.json_file("scattering.json", j);

  if (c.write_csv) {
    std::string out = csv_line({"px", "py", "pz", "phi"});
    out.reserve(set->size() * 80);
    for (std::size_t i = 0; i < set->size(); ++i) {
      const auto p = (*set)[i].momentum();
      out += csv_line({format_double(p[0]), format_double(p[1]), format_double(p[2]), format_double(sol.phi[i])});
    }
    w.csv("phi.csv", out);
  }
}

void cmd_convergence(const RunConfig& c, Writer& w) {
  if (c.N_list.empty()) throw ConfigError("gp.N_list is required for the convergence command");
  const auto study = convergence_study(c.potential, c.N_list, proportional_cutoff(c.cutoff_factor), linear_options(c));

  std::string out = csv_line({"N", "cutoff", "a_lattice", "a_ode", "abs_err"});
  json rows = json::array();
  bool failed = false;
  for (const auto& r : study.rows) {
    out += csv_line({std::to_string(r.N), format_double(r.cutoff), format_double(r.a_lattice), format_double(r.a_ode),
                     format_double(r.abs_err)});
    rows.push_back({{"N", r.N},
                    {"cutoff", r.cutoff},
                    {"momenta", r.momenta},
                    {"a_lattice", number(r.a_lattice)},
                    {"abs_err", number(r.abs_err)},
                    {"iterations", r.iterations},
                    {"residual", r.residual},
                    {"ok", r.ok},
                    {"error", r.error}});
    failed = failed || !r.ok;
  }
  w.csv("convergence.csv", out);
  json j;
  j["potential"] = potential_json(c.potential);
  j["cutoff_factor"] = c.cutoff_factor;
  j["a_ode"] = study.a_ode;
  j["slope"] = optional_number(study.slope);
  j["slope_defined"] = study.slope.has_value();
  j["rows"] = rows;
  w.json_file("convergence.json", j);
  if (failed) {
    w.result.numerical_failure = true;
    w.result.message = "at least one N failed; see convergence.json";
  }
}

void cmd_ed(const RunConfig& c, Writer& w) {
  const int N = require_N(c);
  const auto set = fock_modes(c);
  ScanOptions o;
  o.mu_mode = c.mu_mode;
  o.mu = c.mu_value.value_or(0.0);
  o.total_momentum = c.total_momentum;
  o.dim_cap = c.dim_cap;
  o.eigen = eigen_options(c);
  o.linear = linear_options(c);
  const auto scan = grand_canonical_scan(c.potential, N, set, c.n_min, c.n_max, o);

  std::string out = csv_line({"n", "dim", "energy", "depletion", "condensate_occupation", "residual", "iters"});
  json rows = json::array();
  for (const auto& r : scan.rows) {
    if (r.skipped) {
      out += csv_line({std::to_string(r.n), "", "", "", "", "", ""});
    } else {
      out += csv_line({std::to_string(r.n), std::to_string(r.dim), format_double(r.energy), format_double(r.depletion),
                       format_double(r.condensate_occupation), format_double(r.residual),
                       std::to_string(r.solver_iters)});
    }
    rows.push_back({{"n", r.n},
                    {"dim", r.dim},
                    {"skipped", r.skipped},
                    {"note", r.note},
                    {"energy", r.energy},
                    {"condensate_energy", r.condensate_energy},
                    {"variational_ok", r.skipped || r.energy <= r.condensate_energy + 1e-12 * std::max(1.0, std::abs(r.energy))}});
  }
  w.csv("scan.csv", out);
  json j;
  j["potential"] = potential_json(c.potential);
  j["N"] = N;
  j["modes"] = set->size() + 1;
  j["mu_mode"] = to_string(c.mu_mode);
  j["mu"] = scan.mu;
  j["a_lattice"] = scan.a_lattice;
  j["argmin_n"] = optional_number(scan.argmin_n);
  j["quadratic_fit"] = scan.fit ? json{{"c0", scan.fit->c0}, {"c1", scan.fit->c1}, {"c2", scan.fit->c2}} : json(nullptr);
  j["vertex"] = optional_number(scan.vertex);
  j["predicted_n"] = optional_number(scan.predicted_n);
  j["rows"] = rows;
  w.json_file("ed.json", j);
}

void cmd_trial(const RunConfig& c, Writer& w) {
  const int N = require_N(c);
  const auto set = fock_modes(c);
  std::vector<double> kappas = c.trial_kappa_list;
  if (kappas.empty()) kappas.push_back(c.potential.kappa);

  std::string out = csv_line({"kappa", "n", "dim", "trial_energy", "exact_energy", "gap"});
  json rows = json::array();
  bool all_variational = true;
  for (double k : kappas) {
    const auto v = c.potential.with_kappa(k);
    const auto phi = solve_lattice_scattering(v, N, set, linear_options(c));
    const double mu = resolve_mu(c, v, N, set);
    const auto rep = trial_energy(v, N, mu, phi, true, c.dim_cap, c.tol_unitary, eigen_options(c));
    const double gap = *rep.gap();
    const bool ok = gap >= -1e-12 * std::max(1.0, std::abs(*rep.exact_energy));
    all_variational = all_variational && ok;
    out += csv_line({format_double(k), std::to_string(rep.n), std::to_string(rep.dim), format_double(rep.trial_energy),
                     format_double(*rep.exact_energy), format_double(gap)});
    rows.push_back({{"kappa", k},
                    {"mu", mu},
                    {"trial_energy", rep.trial_energy},
                    {"exact_energy", *rep.exact_energy},
                    {"gap", gap},
                    {"norm_drift", rep.norm_drift},
                    {"variational_ok", ok}});
  }
  w.csv("trial.csv", out);
  json j;
  j["potential"] = potential_json(c.potential);
  j["N"] = N;
  j["modes"] = set->size() + 1;
  j["rows"] = rows;
  j["all_variational"] = all_variational;
  w.json_file("trial.json", j);
}

json check(const std::string& name, json params, double value, double tol, bool pass, std::uint64_t seed) {
  return {{"check_name", name},
          {"parameters", std::move(params)},
          {"residual_or_ratio", number(value)},
          {"tolerance", tol},
          {"pass_flag", pass},
          {"seed", seed}};
}

void cmd_identity(const RunConfig& c, Writer& w) {
  const int N = require_N(c);
  const auto& v = c.potential;
  const auto set = fock_modes(c);
  const int n = c.n_max;
  const auto phi = solve_lattice_scattering(v, N, set, linear_options(c));
  const auto basis = enumerate_basis(set, n, c.total_momentum, c.dim_cap);
  const std::uint64_t seed = c.rng_seed;
  const json sector = {{"N", N}, {"n", n}, {"modes", basis.num_modes()}, {"dim", basis.dim()}, {"kappa", v.kappa}};

  json checks = json::array();
  const auto R = commutator_identity_residual(basis, v, N, phi);
  {
    json p = sector;
    p["inner_cutoff"] = R.inner_cutoff;
    p["inner_dim"] = R.inner_dim;
    checks.push_back(check("commutator_residual_inner", p, R.restricted_norm, c.tol_linear,
                           R.restricted_norm <= c.tol_linear, seed));
    checks.push_back(check("commutator_residual_full", sector, R.full_norm, c.tol_linear, R.full_norm <= c.tol_linear, seed));
  }
  {
    const auto levels = commutator_refinement(v, N, n, c.mode_cutoff * kTwoPi, 1, c.dim_cap, linear_options(c));
    double worst = 0.0;
    json norms = json::array();
    for (std::size_t k = 0; k < levels.size(); ++k) {
      norms.push_back(levels[k].restricted_norm);
      if (k > 0) worst = std::max(worst, levels[k].restricted_norm - levels[k - 1].restricted_norm);
    }
    json p = sector;
    p["restricted_norms"] = norms;
    checks.push_back(check("commutator_refinement_nonincreasing", p, worst, kRefinementFloor, worst <= kRefinementFloor, seed));
  }
  {
    const auto nc = nplus_commutator_check(basis, phi, N);
    json p = sector;
    p["half_weight_ratio"] = nc.half_weight_ratio;
    checks.push_back(check("nplus_generator_commutator", p, nc.max_diff, kNplusCommutatorTol,
                           nc.max_diff <= kNplusCommutatorTol, seed));
  }
  {
    const auto small = nplus_growth_check(basis, phi, N, c.identity_t_points, c.identity_trials, seed, c.tol_unitary);
    const auto large = nplus_growth_check(basis, phi, N, c.identity_t_points, 2 * c.identity_trials, seed, c.tol_unitary);
    const double drift = std::max(small.max_norm_drift, large.max_norm_drift);
    json p = sector;
    p["t_points"] = c.identity_t_points;
    p["trials"] = 2 * c.identity_trials;
    checks.push_back(check("unitarity_norm_drift", p, drift, c.tol_unitary, drift <= c.tol_unitary, seed));
    for (std::size_t k = 0; k < 3; ++k) {
      const double a = small.max_ratio[k], b = large.max_ratio[k];
      const double change = std::abs(b - a) / a;
      json q = sector;
      q["k"] = k + 1;
      q["trials"] = {c.identity_trials, 2 * c.identity_trials};
      q["max_ratio"] = {a, b};
      q["relative_change"] = change;
      checks.push_back(check("nplus_growth_k" + std::to_string(k + 1), q, b, kGrowthStability,
                             std::isfinite(b) && change <= kGrowthStability, seed));
    }
  }
  json j;
  j["potential"] = potential_json(v);
  j["checks"] = checks;
  w.json_file("identity.json", j);
}

}  // namespace

std::string to_string(Command cmd) {
  switch (cmd) {
    case Command::scattering:
      return "scattering";
    case Command::convergence:
      return "convergence";
    case Command::ed:
      return "ed";
    case Command::trial:
      return "trial";
    case Command::identity:
      return "identity";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (auto cmd : {Command::scattering, Command::convergence, Command::ed, Command::trial, Command::identity})
    if (to_string(cmd) == name) return cmd;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CommandResult run_command(Command cmd, const RunConfig& config) {
  config.validate();
  Writer w(config);
  try {
    switch (cmd) {
      case Command::scattering:
        cmd_scattering(config, w);
        break;
      case Command::convergence:
        cmd_convergence(config, w);
        break;
      case Command::ed:
        cmd_ed(config, w);
        break;
      case Command::trial:
        cmd_trial(config, w);
        break;
      case Command::identity:
        cmd_identity(config, w);
        break;
    }
  } catch (const NumericalError& ex) {
    w.result.numerical_failure = true;
    w.result.message = ex.what();
  } catch (const DimensionOverflow& ex) {
    w.result.numerical_failure = true;
    w.result.message = ex.what();
  }
  w.manifest(cmd);
  return std::move(w.result);
}

}  // namespace gpbec
