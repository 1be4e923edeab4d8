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

#ifndef MMSPK_EVAL_EVALUATE_H_
#define MMSPK_EVAL_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmspk/eval/metrics.h"
#include "mmspk/pipeline/bundle.h"
#include "mmspk/synthdata/corpus.h"

namespace mmspk {

// Enrollment is a face observation, test is a speech observation.
struct Trial {
  int enroll_speaker = 0;
  size_t enroll_index = 0;
  int test_speaker = 0;
  size_t test_index = 0;
  bool target = false;
  friend bool operator==(const Trial &, const Trial &) = default;
};

struct TrialConfig {
  int trials_per_speaker = 50;  // of each kind
  uint64_t seed = 1;
};

struct TrialSet {
  Modality enroll = Modality::kFace;
  Modality test = Modality::kSpeech;
  std::vector<Trial> trials;
  friend bool operator==(const TrialSet &, const TrialSet &) = default;
};

// For every held-out speaker, `trials_per_speaker` target trials and as
// many nontarget trials against a different held-out speaker. Throws
// DegenerateInputError with fewer than two held-out speakers.
TrialSet BuildTrials(const Corpus &corpus, const TrialConfig &cfg);

// Cosine between enrollment and test embeddings. Needs bundle.face.
ScoreSet ScoreTrials(const Corpus &corpus, const ModelBundle &bundle,
                     const TrialSet &trials);

// Cross-modal EER with the given face encoder standing in for the bundle's.
double CrossModalEer(const Corpus &corpus, const MlpEncoder &speech,
                     const MlpEncoder &face, const TrialConfig &cfg);

// Fraction of held-out prompts whose nearest held-out speech observation
// (by cosine) belongs to the prompt's speaker.
double PromptRetrievalAccuracy(const Corpus &corpus, const MlpEncoder &speech,
                               const TextEncoder &text);

enum class SilhouetteSource { kNone, kPrompts, kFace };

const char *SilhouetteSourceName(SilhouetteSource s);
SilhouetteSource ParseSilhouetteSource(std::string_view name);

struct EvalConfig {
  TrialConfig trials;
  DcfParams dcf;
  SilhouetteSource silhouette = SilhouetteSource::kPrompts;
};

nlohmann::json EvalConfigToJson(const EvalConfig &c);
void EvalConfigFromJson(const nlohmann::json &j, EvalConfig *c);

struct EvalReport {
  size_t target_trials = 0;
  size_t nontarget_trials = 0;
  EerResult eer;
  MinDcfResult min_dcf;
  DcfParams dcf;
  SilhouetteSource silhouette_source = SilhouetteSource::kNone;
  std::optional<double> silhouette;
  std::optional<double> retrieval_top1;
  std::string bundle_fingerprint;
  std::string corpus_fingerprint;
  EvalConfig config;
};

// Builds trials, scores them and computes every metric. `scores` and `det`
// receive the raw material when non-null. Throws StateError when the bundle
// lacks the face encoder, or the text encoder while prompt silhouette is
// requested.
EvalReport EvaluateBundle(const Corpus &corpus, const ModelBundle &bundle,
                          const EvalConfig &cfg, ScoreSet *scores = nullptr,
                          std::vector<SweepPoint> *det = nullptr);

nlohmann::json ReportToJson(const EvalReport &r);
// Pretty-printed JSON followed by a newline.
std::string SerializeReport(const EvalReport &r);
// "far,frr" header then one line per point, 17 significant digits.
std::string DetCsv(const std::vector<SweepPoint> &points);
// "<score> target|nontarget" per line, 17 significant digits.
std::string ScoreDump(const ScoreSet &s);
ScoreSet ParseScoreDump(const std::string &text);

std::string CorpusFingerprint(const Corpus &corpus);

}  // namespace mmspk

#endif  // MMSPK_EVAL_EVALUATE_H_
