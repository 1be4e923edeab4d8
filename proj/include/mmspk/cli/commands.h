// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_CLI_COMMANDS_H_
#define MMSPK_CLI_COMMANDS_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mmspk {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitMissingPrerequisite = 3,
  kExitDivergence = 4,
};

struct CliEnvironment {
  std::optional<std::string> seed;  // MMSPK_SEED

  static CliEnvironment FromProcess();
};

// Runs `mmspk <args...>` (args exclude the program name) and returns the
// exit code. Subcommands: gen-data, train, eval, embed.
int RunCli(const std::vector<std::string> &args, const CliEnvironment &env,
           std::ostream &out, std::ostream &err);

}  // namespace mmspk

#endif  // MMSPK_CLI_COMMANDS_H_
