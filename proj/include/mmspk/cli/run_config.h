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

#ifndef MMSPK_CLI_RUN_CONFIG_H_
#define MMSPK_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "mmspk/eval/evaluate.h"
#include "mmspk/pipeline/train_config.h"
#include "mmspk/synthdata/corpus.h"

namespace mmspk {

// Environment variable that supplies the global seed.
inline constexpr char kSeedEnvVar[] = "MMSPK_SEED";

// Everything a command needs besides paths and selectors. Sections:
// "corpus", "train", "loss", "eval", plus an optional top-level "seed".
struct RunConfig {
  CorpusConfig corpus;
  TrainConfig train;
  EvalConfig eval;
  // When set it was copied into corpus.seed, train.seed and eval seed.
  std::optional<uint64_t> seed;
};

// Parses a config document. `env_seed` is the raw MMSPK_SEED value, if
// any. Throws ConfigError on unknown keys, bad values, a global seed given
// both in the file and the environment, or a global seed combined with a
// per-section seed.
RunConfig RunConfigFromJson(const nlohmann::json &j,
                            const std::optional<std::string> &env_seed = {});

// Reads and parses `path`; an empty path yields the defaults (still subject
// to `env_seed`). Throws FormatError when the file cannot be read and
// ConfigError when it is not valid JSON.
RunConfig LoadRunConfig(const std::filesystem::path &path,
                        const std::optional<std::string> &env_seed = {});

// Full config with every default filled in.
nlohmann::json RunConfigToJson(const RunConfig &c);
// FNV-1a of the compact echo, 16 hex digits.
std::string RunConfigHash(const RunConfig &c);

}  // namespace mmspk

#endif  // MMSPK_CLI_RUN_CONFIG_H_
