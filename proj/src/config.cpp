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

#include "gpbec/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gpbec/errors.hpp"

namespace gpbec {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(',');
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, std::string_view value, const std::string& what) {
  throw ConfigError("config key '" + key + "' = '" + std::string(value) + "': " + what);
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    bad(key, v, "expected a real number");
  return out;
}

long long to_int(const std::string& key, std::string_view v) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad(key, v, "expected an integer");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += f(xs[i]);
  }
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "potential.profile", "potential.radius",    "potential.height",     "potential.kappa",
      "gp.N",              "gp.N_list",           "gp.cutoff_factor",     "sector.mode_cutoff",
      "sector.n_min",      "sector.n_max",        "sector.total_momentum", "mu.mode",
      "mu.value",          "solver.tol_linear",   "solver.tol_eigen",     "solver.tol_unitary",
      "solver.dim_cap",    "solver.backend",      "trial.kappa_list",     "identity.trials",
      "identity.t_points", "rng_seed",            "output.dir",           "output.formats"};
  return keys;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, bool> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view v = trim(line.substr(eq + 1));
    if (seen[key]) throw ConfigError("config key '" + key + "' given twice");
    seen[key] = true;
    if (v.empty()) bad(key, v, "empty value");

    if (key == "potential.profile") {
      try {
        c.potential.profile = parse_profile(v);
      } catch (const std::invalid_argument& ex) {
        bad(key, v, ex.what());
      }
    } else if (key == "potential.radius") {
      c.potential.radius = to_double(key, v);
    } else if (key == "potential.height") {
      c.potential.height = to_double(key, v);
    } else if (key == "potential.kappa") {
      c.potential.kappa = to_double(key, v);
    } else if (key == "gp.N") {
      c.N = int(to_int(key, v));
    } else if (key == "gp.N_list") {
      for (auto item : split_list(v)) c.N_list.push_back(int(to_int(key, item)));
    } else if (key == "gp.cutoff_factor") {
      c.cutoff_factor = to_double(key, v);
    } else if (key == "sector.mode_cutoff") {
      c.mode_cutoff = to_double(key, v);
    } else if (key == "sector.n_min") {
      c.n_min = int(to_int(key, v));
    } else if (key == "sector.n_max") {
      c.n_max = int(to_int(key, v));
    } else if (key == "sector.total_momentum") {
      const auto items = split_list(v);
      if (items.size() != 3) bad(key, v, "expected three integers");
      c.total_momentum = {int(to_int(key, items[0])), int(to_int(key, items[1])), int(to_int(key, items[2]))};
    } else if (key == "mu.mode") {
      try {
        c.mu_mode = parse_mu_mode(v);
      } catch (const std::invalid_argument& ex) {
        bad(key, v, ex.what());
      }
    } else if (key == "mu.value") {
      c.mu_value = to_double(key, v);
    } else if (key == "solver.tol_linear") {
      c.tol_linear = to_double(key, v);
    } else if (key == "solver.tol_eigen") {
      c.tol_eigen = to_double(key, v);
    } else if (key == "solver.tol_unitary") {
      c.tol_unitary = to_double(key, v);
    } else if (key == "solver.dim_cap") {
      const auto cap = to_int(key, v);
      if (cap < 1) bad(key, v, "must be positive");
      c.dim_cap = std::size_t(cap);
    } else if (key == "solver.backend") {
      try {
        c.backend = parse_backend(v);
      } catch (const std::invalid_argument& ex) {
        bad(key, v, ex.what());
      }
    } else if (key == "trial.kappa_list") {
      for (auto item : split_list(v)) c.trial_kappa_list.push_back(to_double(key, item));
    } else if (key == "identity.trials") {
      c.identity_trials = int(to_int(key, v));
    } else if (key == "identity.t_points") {
      c.identity_t_points.clear();
      for (auto item : split_list(v)) c.identity_t_points.push_back(to_double(key, item));
    } else if (key == "rng_seed") {
      const auto s = to_int(key, v);
      if (s < 0) bad(key, v, "must be nonnegative");
      c.rng_seed = std::uint64_t(s);
    } else if (key == "output.dir") {
      c.output_dir = std::string(v);
    } else if (key == "output.formats") {
      c.write_csv = c.write_json = false;
      for (auto item : split_list(v)) {
        if (item == "csv")
          c.write_csv = true;
        else if (item == "json")
          c.write_json = true;
        else
          bad(key, v, "formats must be drawn from {csv, json}");
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void RunConfig::validate() const {
  try {
    potential.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (N && *N < 1) throw ConfigError("gp.N must be a positive integer");
  for (int n : N_list)
    if (n < 1) throw ConfigError("gp.N_list entries must be positive integers");
  if (!(cutoff_factor >= 1.0)) throw ConfigError("gp.cutoff_factor must be at least 1");
  if (!(mode_cutoff > 0.0)) throw ConfigError("sector.mode_cutoff must be positive");
  if (n_min < 0 || n_max < n_min) throw ConfigError("need 0 <= sector.n_min <= sector.n_max");
  if (n_max > 255) throw ConfigError("sector.n_max above 255 is not supported");
  if (mu_mode == MuMode::explicit_value && !mu_value) throw ConfigError("mu.value is required when mu.mode = explicit");
  if (mu_mode == MuMode::eight_pi_a && mu_value) throw ConfigError("mu.value is only allowed when mu.mode = explicit");
  if (!(tol_linear > 0.0) || !(tol_eigen > 0.0) || !(tol_unitary > 0.0))
    throw ConfigError("solver tolerances must be positive");
  for (double k : trial_kappa_list)
    if (!(k >= 0.0)) throw ConfigError("trial.kappa_list entries must be nonnegative");
  if (identity_trials < 2) throw ConfigError("identity.trials must be at least 2");
  for (double t : identity_t_points)
    if (!(t >= -1.0 && t <= 1.0)) throw ConfigError("identity.t_points must lie in [-1, 1]");
}

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> m;
  m["potential.profile"] = to_string(potential.profile);
  m["potential.radius"] = fmt(potential.radius);
  m["potential.height"] = fmt(potential.height);
  m["potential.kappa"] = fmt(potential.kappa);
  m["gp.N"] = N ? std::to_string(*N) : "";
  m["gp.N_list"] = join(N_list, [](int n) { return std::to_string(n); });
  m["gp.cutoff_factor"] = fmt(cutoff_factor);
  m["sector.mode_cutoff"] = fmt(mode_cutoff);
  m["sector.n_min"] = std::to_string(n_min);
  m["sector.n_max"] = std::to_string(n_max);
  m["sector.total_momentum"] = std::to_string(total_momentum.x) + ", " + std::to_string(total_momentum.y) + ", " +
                               std::to_string(total_momentum.z);
  m["mu.mode"] = to_string(mu_mode);
  m["mu.value"] = mu_value ? fmt(*mu_value) : "";
  m["solver.tol_linear"] = fmt(tol_linear);
  m["solver.tol_eigen"] = fmt(tol_eigen);
  m["solver.tol_unitary"] = fmt(tol_unitary);
  m["solver.dim_cap"] = std::to_string(dim_cap);
  m["solver.backend"] = to_string(backend);
  m["trial.kappa_list"] = join(trial_kappa_list, fmt);
  m["identity.trials"] = std::to_string(identity_trials);
  m["identity.t_points"] = join(identity_t_points, fmt);
  m["rng_seed"] = std::to_string(rng_seed);
  m["output.dir"] = output_dir.string();
  std::vector<std::string> formats;
  if (write_csv) formats.push_back("csv");
  if (write_json) formats.push_back("json");
  m["output.formats"] = join(formats, [](const std::string& s) { return s; });
  return m;
}

}  // namespace gpbec
