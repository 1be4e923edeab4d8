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

#ifndef MMSPK_SYNTHDATA_CORPUS_IO_H_
#define MMSPK_SYNTHDATA_CORPUS_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mmspk/synthdata/corpus.h"

namespace mmspk {

inline constexpr int kCorpusFormatVersion = 1;

// Line-delimited JSON, one record per line, in this order:
//   {"type":"corpus", "format_version":1, "config":{...}}
//   {"type":"model", "modality":..., "identity_map":M, "nuisance_map":M}  x2
//   {"type":"speaker", "id", "split", "latent", "gender", "pitch", "tempo"}
//   {"type":"observation", "modality", "speaker", "index", "feature",
//    "nuisance", "noise"}
//   {"type":"prompt", "speaker", "index", "tokens"}
// where M is {"rows":r, "cols":c, "data":[row-major values]}.
std::string CorpusToJsonLines(const Corpus &corpus);
// Throws FormatError on malformed records or inconsistent contents.
Corpus CorpusFromJsonLines(const std::string &text);

void WriteCorpus(const std::filesystem::path &path, const Corpus &corpus);
Corpus ReadCorpus(const std::filesystem::path &path);

nlohmann::json CorpusConfigToJson(const CorpusConfig &c);
// Fills `c` from `j`, keeping defaults for absent keys. Throws ConfigError on
// unknown keys or wrongly typed values.
void CorpusConfigFromJson(const nlohmann::json &j, CorpusConfig *c);

nlohmann::json ObservationToJson(const Observation &o, int index = -1);
nlohmann::json PromptToJson(const PromptTokens &p, int index = -1);
// Lenient readers used for embedding requests: only modality + feature (or
// tokens) are required; speaker defaults to -1.
Observation ObservationFromJson(const nlohmann::json &j);
PromptTokens PromptFromJson(const nlohmann::json &j);

}  // namespace mmspk

#endif  // MMSPK_SYNTHDATA_CORPUS_IO_H_
