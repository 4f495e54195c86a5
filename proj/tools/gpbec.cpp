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

// Command line driver: one config file, one subcommand per study.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "gpbec/commands.hpp"
#include "gpbec/config.hpp"
#include "gpbec/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gross-Pitaevskii Bose gas numerics: scattering lengths, truncated Fock spaces, Bogoliubov checks"};
  app.set_version_flag("--version", GPBEC_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  for (const char* name : {"scattering", "convergence", "ed", "trial", "identity"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed (overrides rng_seed)");
  }
  app.get_subcommand("scattering")->description("solve the lattice scattering equation for one N");
  app.get_subcommand("convergence")->description("a_N against the continuum scattering length over gp.N_list");
  app.get_subcommand("ed")->description("sector ground states over sector.n_min..sector.n_max");
  app.get_subcommand("trial")->description("Bogoliubov trial energy against the exact sector energy");
  app.get_subcommand("identity")->description("commutator identity and N_+ growth checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto cmd = gpbec::parse_command(app.get_subcommands().front()->get_name());
    auto config = gpbec::load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.rng_seed = *seed;
    const auto result = gpbec::run_command(cmd, config);
    if (result.numerical_failure) {
      std::cerr << "gpbec: numerical failure: " << result.message << '\n';
      return kExitNumerical;
    }
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return kExitOk;
  } catch (const gpbec::ConfigError& e) {
    std::cerr << "gpbec: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gpbec: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "gpbec: " << e.what() << '\n';
    return kExitNumerical;
  }
}
