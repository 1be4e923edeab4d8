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

#include "mmspk/cli/run_config.h"

#include <cinttypes>
#include <cstdio>

#include "mmspk/encoders/checkpoint.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/synthdata/corpus_io.h"
#include "mmspk/util/json_fields.h"

namespace mmspk {

using nlohmann::json;

namespace {

uint64_t ParseSeed(const std::string &text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(std::string(kSeedEnvVar) +
                      " must be a non-negative integer, got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception &) {
    throw ConfigError(std::string(kSeedEnvVar) + " is out of range");
  }
}

bool HasSeed(const json *section) {
  return section && section->is_object() && section->contains("seed");
}

}  // namespace

RunConfig RunConfigFromJson(const json &j,
                            const std::optional<std::string> &env_seed) {
  RunConfig c;
  JsonFields f(j, "");
  const json *corpus = f.Child("corpus");
  const json *train = f.Child("train");
  const json *loss = f.Child("loss");
  const json *eval = f.Child("eval");
  std::optional<uint64_t> file_seed;
  if (const json *s = f.Child("seed"); s && !s->is_null()) {
    if (!s->is_number_unsigned() &&
        !(s->is_number_integer() && s->get<int64_t>() >= 0))
      throw ConfigError("config key 'seed' must be a non-negative integer");
    file_seed = s->get<uint64_t>();
  }
  f.Finish();

  if (corpus) CorpusConfigFromJson(*corpus, &c.corpus);
  if (train) TrainConfigFromJson(*train, &c.train);
  if (loss) LossConfigFromJson(*loss, &c.train.loss);
  if (eval) EvalConfigFromJson(*eval, &c.eval);
  c.corpus.Validate();
  c.train.Validate();

  if (file_seed && env_seed)
    throw ConfigError(std::string("global seed set both in the config file and in ") +
                      kSeedEnvVar);
  if (env_seed) c.seed = ParseSeed(*env_seed);
  if (file_seed) c.seed = file_seed;
  if (c.seed) {
    for (const auto &[name, section] :
         {std::pair{"corpus", corpus}, {"train", train}, {"eval", eval}})
      if (HasSeed(section))
        throw ConfigError(std::string("config key '") + name +
                          ".seed' conflicts with the global seed");
    c.corpus.seed = *c.seed;
    c.train.seed = *c.seed;
    c.eval.trials.seed = *c.seed;
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path &path,
                        const std::optional<std::string> &env_seed) {
  if (path.empty()) return RunConfigFromJson(json::object(), env_seed);
  const std::string text = ReadFileBytes(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(path.string() + ": not valid JSON: " + e.what());
  }
  return RunConfigFromJson(j, env_seed);
}

json RunConfigToJson(const RunConfig &c) {
  json j{{"corpus", CorpusConfigToJson(c.corpus)},
         {"train", TrainConfigToJson(c.train)},
         {"loss", LossConfigToJson(c.train.loss)},
         {"eval", EvalConfigToJson(c.eval)}};
  j["seed"] = c.seed ? json(*c.seed) : json();
  // Keep the echo loadable: the global seed stands in for the section seeds.
  if (c.seed)
    for (const char *section : {"corpus", "train", "eval"}) j[section].erase("seed");
  return j;
}

std::string RunConfigHash(const RunConfig &c) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64,
                Fnv1a64(RunConfigToJson(c).dump()));
  return buf;
}

}  // namespace mmspk
