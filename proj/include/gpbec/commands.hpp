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

#ifndef GPBEC_COMMANDS_HPP
#define GPBEC_COMMANDS_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gpbec/config.hpp"

namespace gpbec {

enum class Command { scattering, convergence, ed, trial, identity };

std::string to_string(Command cmd);
Command parse_command(std::string_view name);

struct CommandResult {
  std::vector<std::filesystem::path> files;  ///< written, manifest last
  bool numerical_failure = false;
  std::string message;
};

/// Runs one study and writes its outputs plus manifest.json into
/// config.output_dir. ConfigError propagates; numerical failures are recorded
/// in the JSON outputs and reported through the result.
CommandResult run_command(Command cmd, const RunConfig& config);

/// 17 significant digits; "nan" for NaN.
std::string format_double(double x);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gpbec

#endif  // GPBEC_COMMANDS_HPP
