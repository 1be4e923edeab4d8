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

#include "mmspk/eval/evaluate.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mmspk/encoders/checkpoint.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/numerics/random.h"
#include "mmspk/synthdata/corpus_io.h"
#include "mmspk/util/json_fields.h"

namespace mmspk {

using nlohmann::json;

namespace {

constexpr int kReportFormatVersion = 1;

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string Num17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Embeddings of every held-out observation of one modality, [speaker][k].
std::vector<EmbeddingBatch> EmbedHeldOut(const Corpus &corpus,
                                         const MlpEncoder &encoder,
                                         Modality modality) {
  std::vector<EmbeddingBatch> out(corpus.speakers.size());
  for (int id : corpus.HeldOutIds())
    for (const Observation &o : corpus.ObservationsOf(modality, id))
      out[id].push_back(encoder.Encode(o.feature).values);
  return out;
}

ScoreSet Score(const Corpus &corpus, const MlpEncoder &speech,
               const MlpEncoder &face, const TrialSet &trials) {
  const auto enroll = EmbedHeldOut(corpus, face, Modality::kFace);
  const auto test = EmbedHeldOut(corpus, speech, Modality::kSpeech);
  ScoreSet s;
  for (const Trial &t : trials.trials) {
    s.scores.push_back(CosineSimilarity(enroll[t.enroll_speaker][t.enroll_index],
                                        test[t.test_speaker][t.test_index]));
    s.targets.push_back(t.target ? 1 : 0);
  }
  return s;
}

json FiniteOrNull(double x) { return std::isfinite(x) ? json(x) : json(); }

}  // namespace

TrialSet BuildTrials(const Corpus &corpus, const TrialConfig &cfg) {
  const std::vector<int> ids = corpus.HeldOutIds();
  if (ids.size() < 2)
    throw DegenerateInputError("BuildTrials: need at least two held-out speakers");
  if (cfg.trials_per_speaker < 1)
    throw ConfigError("eval.trials_per_speaker must be >= 1");
  Rng rng(cfg.seed);
  auto pick = [&rng](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
  };
  TrialSet set;
  for (size_t k = 0; k < ids.size(); ++k) {
    const int s = ids[k];
    for (int t = 0; t < cfg.trials_per_speaker; ++t) {
      Trial target{s, pick(corpus.face[s].size()), s,
                   pick(corpus.speech[s].size()), true};
      set.trials.push_back(target);
      size_t other = pick(ids.size() - 1);
      if (other >= k) ++other;
      const int o = ids[other];
      set.trials.push_back({s, pick(corpus.face[s].size()), o,
                            pick(corpus.speech[o].size()), false});
    }
  }
  return set;
}

ScoreSet ScoreTrials(const Corpus &corpus, const ModelBundle &bundle,
                     const TrialSet &trials) {
  if (!bundle.speech || !bundle.face)
    throw StateError("scoring needs the speech and face encoders");
  return Score(corpus, *bundle.speech, *bundle.face, trials);
}

double CrossModalEer(const Corpus &corpus, const MlpEncoder &speech,
                     const MlpEncoder &face, const TrialConfig &cfg) {
  return ComputeEer(Score(corpus, speech, face, BuildTrials(corpus, cfg))).eer;
}

double PromptRetrievalAccuracy(const Corpus &corpus, const MlpEncoder &speech,
                               const TextEncoder &text) {
  const auto gallery = EmbedHeldOut(corpus, speech, Modality::kSpeech);
  size_t hits = 0, queries = 0;
  for (int id : corpus.HeldOutIds()) {
    for (const PromptTokens &p : corpus.prompts[id]) {
      const Vector q = text.Encode(p.tokens).values;
      double best = -INFINITY;
      int best_speaker = -1;
      for (int g : corpus.HeldOutIds())
        for (const Vector &e : gallery[g]) {
          const double c = CosineSimilarity(q, e);
          if (c > best) {
            best = c;
            best_speaker = g;
          }
        }
      hits += best_speaker == id;
      ++queries;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries);
}

const char *SilhouetteSourceName(SilhouetteSource s) {
  switch (s) {
    case SilhouetteSource::kNone:
      return "none";
    case SilhouetteSource::kPrompts:
      return "prompts";
    case SilhouetteSource::kFace:
      return "face";
  }
  return "none";
}

SilhouetteSource ParseSilhouetteSource(std::string_view name) {
  if (name == "none") return SilhouetteSource::kNone;
  if (name == "prompts") return SilhouetteSource::kPrompts;
  if (name == "face") return SilhouetteSource::kFace;
  throw ConfigError("eval.silhouette must be one of none, prompts, face");
}

json EvalConfigToJson(const EvalConfig &c) {
  return json{{"trials_per_speaker", c.trials.trials_per_speaker},
              {"seed", c.trials.seed},
              {"p_target", c.dcf.p_target},
              {"c_miss", c.dcf.c_miss},
              {"c_fa", c.dcf.c_fa},
              {"silhouette", SilhouetteSourceName(c.silhouette)}};
}

void EvalConfigFromJson(const json &j, EvalConfig *c) {
  JsonFields f(j, "eval");
  f.Get("trials_per_speaker", &c->trials.trials_per_speaker);
  f.Get("seed", &c->trials.seed);
  f.Get("p_target", &c->dcf.p_target);
  f.Get("c_miss", &c->dcf.c_miss);
  f.Get("c_fa", &c->dcf.c_fa);
  std::string source;
  f.Get("silhouette", &source);
  if (!source.empty()) c->silhouette = ParseSilhouetteSource(source);
  f.Finish();
  if (c->trials.trials_per_speaker < 1)
    throw ConfigError("eval.trials_per_speaker must be >= 1");
  if (!(c->dcf.p_target > 0.0 && c->dcf.p_target < 1.0))
    throw ConfigError("eval.p_target must lie in (0, 1)");
  if (!(c->dcf.c_miss > 0.0 && c->dcf.c_fa > 0.0))
    throw ConfigError("eval.c_miss and eval.c_fa must be > 0");
}

EvalReport EvaluateBundle(const Corpus &corpus, const ModelBundle &bundle,
                          const EvalConfig &cfg, ScoreSet *scores,
                          std::vector<SweepPoint> *det) {
  if (!bundle.speech || !bundle.face)
    throw StateError("evaluation needs a bundle with the stage-1 face encoder");
  if (cfg.silhouette == SilhouetteSource::kPrompts && !bundle.text)
    throw StateError("prompt silhouette needs the stage-2 text encoder");

  const TrialSet trials = BuildTrials(corpus, cfg.trials);
  ScoreSet s = ScoreTrials(corpus, bundle, trials);
  EvalReport r;
  r.config = cfg;
  r.target_trials = s.num_targets();
  r.nontarget_trials = s.size() - r.target_trials;
  r.eer = ComputeEer(s);
  r.dcf = cfg.dcf;
  r.min_dcf = ComputeMinDcf(s, cfg.dcf);
  r.silhouette_source = cfg.silhouette;

  if (cfg.silhouette != SilhouetteSource::kNone) {
    EmbeddingBatch points;
    std::vector<int> genders;
    for (int id : corpus.HeldOutIds()) {
      const int g = static_cast<int>(corpus.speakers[id].attributes.gender);
      if (cfg.silhouette == SilhouetteSource::kPrompts) {
        for (const PromptTokens &p : corpus.prompts[id]) {
          points.push_back(EmbedAny(bundle, p).values);
          genders.push_back(g);
        }
      } else {
        for (const Observation &o : corpus.face[id]) {
          points.push_back(EmbedAny(bundle, o).values);
          genders.push_back(g);
        }
      }
    }
    r.silhouette = SilhouetteScore(points, genders);
  }
  if (bundle.text)
    r.retrieval_top1 = PromptRetrievalAccuracy(corpus, *bundle.speech, *bundle.text);
  r.bundle_fingerprint = BundleFingerprint(bundle);
  r.corpus_fingerprint = CorpusFingerprint(corpus);
  if (det) *det = DetPoints(s);
  if (scores) *scores = std::move(s);
  return r;
}

json ReportToJson(const EvalReport &r) {
  json j;
  j["format_version"] = kReportFormatVersion;
  j["trials"] = {{"enroll", "face"},
                 {"test", "speech"},
                 {"target", r.target_trials},
                 {"nontarget", r.nontarget_trials},
                 {"per_speaker", r.config.trials.trials_per_speaker},
                 {"seed", r.config.trials.seed}};
  j["eer"] = {{"value", r.eer.eer},
              {"threshold", FiniteOrNull(r.eer.threshold)},
              {"interpolation", "linear"}};
  j["min_dcf"] = {{"value", r.min_dcf.min_dcf},
                  {"threshold", FiniteOrNull(r.min_dcf.threshold)},
                  {"p_target", r.dcf.p_target},
                  {"c_miss", r.dcf.c_miss},
                  {"c_fa", r.dcf.c_fa}};
  j["silhouette"] = {{"source", SilhouetteSourceName(r.silhouette_source)},
                     {"clusters", "gender"},
                     {"distance", "cosine"},
                     {"value", r.silhouette ? json(*r.silhouette) : json()}};
  j["retrieval"] = {
      {"top1", r.retrieval_top1 ? json(*r.retrieval_top1) : json()}};
  j["fingerprints"] = {{"bundle", r.bundle_fingerprint},
                       {"corpus", r.corpus_fingerprint}};
  return j;
}

std::string SerializeReport(const EvalReport &r) {
  return ReportToJson(r).dump(2) + "\n";
}

std::string DetCsv(const std::vector<SweepPoint> &points) {
  std::string out = "far,frr\n";
  for (const SweepPoint &p : points)
    out += Num17(p.far) + "," + Num17(p.frr) + "\n";
  return out;
}

std::string ScoreDump(const ScoreSet &s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i)
    out += Num17(s.scores[i]) + (s.targets[i] ? " target\n" : " nontarget\n");
  return out;
}

ScoreSet ParseScoreDump(const std::string &text) {
  ScoreSet s;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    double score;
    std::string label, extra;
    if (!(fields >> score >> label) || (fields >> extra) ||
        (label != "target" && label != "nontarget"))
      throw FormatError("score dump line " + std::to_string(line_no) +
                        ": expected '<score> target|nontarget'");
    s.scores.push_back(score);
    s.targets.push_back(label == "target" ? 1 : 0);
  }
  return s;
}

std::string CorpusFingerprint(const Corpus &corpus) {
  return Hex(Fnv1a64(CorpusToJsonLines(corpus)));
}

}  // namespace mmspk
