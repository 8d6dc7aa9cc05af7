// Copyright 2026 The nbpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NBPM_TOOLS_CLI_HPP_
#define NBPM_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace nbpm::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitSelftest = 3;

// When set, output is written to <dir>/<subcommand>.<csv|json> instead of
// the output stream.
inline constexpr const char* kOutputDirEnv = "NBPM_OUTPUT_DIR";

// Contents of the bundled table2.json.
std::string_view bundled_table2_config();

// Runs one invocation. args excludes the program name. Results go to `out`
// (or the output directory), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick invariant checks behind the `selftest` subcommand.
std::vector<SelftestOutcome> run_selftests(unsigned jobs);

}  // namespace nbpm::cli

#endif  // NBPM_TOOLS_CLI_HPP_
