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

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

#include "gpbec/commands.hpp"
#include "gpbec/config.hpp"
#include "gpbec/errors.hpp"

using namespace gpbec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("gpbec_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config_at(const std::string& text, const fs::path& dir) {
  RunConfig c = parse_config(text);
  c.output_dir = dir;
  return c;
}

}  // namespace

TEST_CASE("parse a full config") {
  const auto c = parse_config(
      "# comment\n"
      "potential.profile = soft_radial\n"
      "potential.radius = 1.5  # trailing\n"
      "potential.kappa = 0.25\n"
      "gp.N_list = 8, 16\n"
      "sector.total_momentum = 1, 0, -1\n"
      "mu.mode = explicit\n"
      "mu.value = 2.5\n"
      "solver.backend = fft_cg\n"
      "output.formats = json\n"
      "\n");
  CHECK(c.potential.profile == Profile::soft_radial);
  CHECK(c.potential.radius == 1.5);
  CHECK(c.potential.kappa == 0.25);
  CHECK(c.N_list == std::vector<int>{8, 16});
  CHECK(c.total_momentum == LatticeVector{1, 0, -1});
  CHECK(c.mu_mode == MuMode::explicit_value);
  CHECK(*c.mu_value == 2.5);
  CHECK(c.backend == ScatteringBackend::fft_cg);
  CHECK_FALSE(c.write_csv);
  CHECK(c.write_json);
}

TEST_CASE("resolved config lists every key") {
  const auto r = parse_config("gp.N = 4\n").resolved();
  for (const auto& k : config_keys()) CHECK(r.count(k) == 1);
  CHECK(r.size() == config_keys().size());
  CHECK(r.at("gp.N") == "4");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("mu.mode = explicit\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mu.value = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("nonsense.key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gp.N = 4\ngp.N = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gp.N = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("gp.N = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("potential.radius = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sector.n_min = 3\nsector.n_max = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("identity.t_points = 0, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("solver.backend = quantum\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/gpbec.cfg"), ConfigError);
}

TEST_CASE("command names") {
  for (auto c : {Command::scattering, Command::convergence, Command::ed, Command::trial, Command::identity})
    CHECK(parse_command(to_string(c)) == c);
  CHECK_THROWS_AS(parse_command("bogus"), ConfigError);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("commands require their N settings") {
  const auto dir = scratch("missing");
  CHECK_THROWS_AS(run_command(Command::scattering, config_at("gp.N_list = 4\n", dir)), ConfigError);
  CHECK_THROWS_AS(run_command(Command::convergence, config_at("gp.N = 4\n", dir)), ConfigError);
}

TEST_CASE("free scattering writes zeros and a manifest") {
  const auto dir = scratch("free");
  const auto res = run_command(Command::scattering, config_at("gp.N = 2\ngp.cutoff_factor = 1\n", dir));
  CHECK_FALSE(res.numerical_failure);
  REQUIRE(fs::exists(dir / "phi.csv"));
  std::ifstream in(dir / "phi.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "px,py,pz,phi");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 32);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["command"] == "scattering");
  CHECK(m["config"].size() == config_keys().size());
  CHECK(res.files.back().filename() == "manifest.json");
}

TEST_CASE("runs are byte-reproducible") {
  const std::string text =
      "potential.kappa = 0.1\ngp.N = 4\nsector.n_max = 4\nidentity.trials = 10\nrng_seed = 3\n";
  for (auto cmd : {Command::scattering, Command::ed, Command::trial, Command::identity}) {
    const auto a = scratch("rep_a");
    const auto b = scratch("rep_b");
    const auto ra = run_command(cmd, config_at(text, a));
    const auto rb = run_command(cmd, config_at(text, b));
    REQUIRE(ra.files.size() == rb.files.size());
    for (const auto& f : ra.files) {
      INFO(to_string(cmd), " ", f.filename().string());
      if (f.filename() == "manifest.json") continue;  // embeds the output directory
      CHECK(slurp(f) == slurp(b / f.filename()));
    }
  }
}

TEST_CASE("free-gas checks through the commands") {
  const auto dir = scratch("ed_free");
  run_command(Command::ed, config_at("gp.N = 3\nsector.n_max = 3\nmu.mode = explicit\nmu.value = 1\n", dir));
  std::ifstream in(dir / "scan.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,dim,energy,depletion,condensate_occupation,residual,iters");
  for (int n = 0; n <= 3; ++n) {
    std::getline(in, line);
    std::stringstream ss(line);
    std::string f;
    std::getline(ss, f, ',');
    CHECK(std::stoi(f) == n);
    std::getline(ss, f, ',');
    std::getline(ss, f, ',');
    CHECK(std::stod(f) == -double(n));
  }

  const auto idir = scratch("identity_free");
  run_command(Command::identity, config_at("gp.N = 3\nsector.n_max = 3\nidentity.trials = 4\n", idir));
  const auto j = nlohmann::json::parse(slurp(idir / "identity.json"));
  REQUIRE(j["checks"].size() == 8);
  for (const auto& c : j["checks"]) {
    CHECK(c["pass_flag"] == true);
    CHECK(c.contains("seed"));
    CHECK(c.contains("tolerance"));
  }
}

TEST_CASE("oversized sectors are flagged, not fatal") {
  const auto dir = scratch("capped");
  const auto res = run_command(
      Command::ed, config_at("potential.kappa = 0.1\ngp.N = 2\nsector.mode_cutoff = 1.8\nsector.n_max = 4\n"
                             "solver.dim_cap = 50\n",
                             dir));
  CHECK_FALSE(res.numerical_failure);
  const std::string csv = slurp(dir / "scan.csv");
  CHECK(csv.find(",,,") != std::string::npos);
}

TEST_CASE("atomic file writes") {
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  write_file_atomic(dir / "x.txt", "hello\n");
  write_file_atomic(dir / "x.txt", "world\n");
  CHECK(slurp(dir / "x.txt") == "world\n");
  int count = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
  CHECK(count == 1);
}
