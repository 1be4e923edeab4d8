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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/pipeline/bundle.h"
#include "mmspk/pipeline/training.h"
#include "support/fixtures.h"

using namespace mmspk;
using namespace mmspk::testing;
namespace fs = std::filesystem;

namespace {

fs::path ScratchDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("mmspk_pipeline_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string ReadFile(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const fs::path &p, const std::string &bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

}  // namespace

TEST_CASE("stage prerequisites and config validation") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  ModelBundle b;
  CHECK_THROWS_AS(RunStage(1, corpus, cfg, &b, nullptr), StateError);
  CHECK_THROWS_AS(RunStage(2, corpus, cfg, &b, nullptr), StateError);
  CHECK_THROWS_AS(RunStage(3, corpus, cfg, &b, nullptr), ConfigError);

  cfg.steps = 0;
  CHECK_THROWS_AS(RunStage(0, corpus, cfg, &b, nullptr), ConfigError);
  cfg = TinyTrainConfig();
  cfg.batch_size = 1;
  CHECK_THROWS_AS(RunStage(0, corpus, cfg, &b, nullptr), ConfigError);
  cfg = TinyTrainConfig();
  cfg.learning_rate = -1;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
}

TEST_CASE("train config json round trip") {
  TrainConfig c;
  c.steps = 77;
  c.text_pairs = TextPairs::kFaceOnly;
  c.ablation = Ablation::kNoKd;
  c.loss.kd_penalty = KdPenalty::kSquared;
  c.loss.gamma = 3.5;
  TrainConfig back;
  TrainConfigFromJson(TrainConfigToJson(c), &back);
  LossConfigFromJson(LossConfigToJson(c.loss), &back.loss);
  CHECK(TrainConfigToJson(back) == TrainConfigToJson(c));
  CHECK(LossConfigToJson(back.loss) == LossConfigToJson(c.loss));
  CHECK_THROWS_AS(TrainConfigFromJson(nlohmann::json{{"stepz", 1}}, &back),
                  ConfigError);
  CHECK_THROWS_AS(LossConfigFromJson(nlohmann::json{{"mu", 1.0}}, &back.loss),
                  ConfigError);
  CHECK_THROWS_AS(
      TrainConfigFromJson(nlohmann::json{{"text_pairs", "audio"}}, &back),
      ConfigError);
}

TEST_CASE("training is deterministic and leaves frozen encoders alone") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  const TrainConfig cfg = TinyTrainConfig();
  ModelBundle a;
  std::vector<TrainLogEntry> log_a;
  RunStage(0, corpus, cfg, &a, &log_a);
  const MlpEncoder speech = *a.speech;
  const MlpEncoder teacher = *a.face_teacher;
  RunStage(1, corpus, cfg, &a, &log_a);
  RunStage(2, corpus, cfg, &a, &log_a);
  CHECK(*a.speech == speech);
  CHECK(*a.face_teacher == teacher);

  ModelBundle b;
  std::vector<TrainLogEntry> log_b;
  for (int stage = 0; stage < 3; ++stage) RunStage(stage, corpus, cfg, &b, &log_b);
  CHECK(a == b);
  REQUIRE(log_a.size() == log_b.size());
  for (size_t i = 0; i < log_a.size(); ++i)
    CHECK(LogEntryToJson(log_a[i]) == LogEntryToJson(log_b[i]));

  TrainConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK_FALSE(TrainTiny(corpus, other, 0) == TrainTiny(corpus, cfg, 0));

  // Rerunning stage 1 drops the text encoder trained on the old face encoder.
  RunStage(1, corpus, cfg, &a, nullptr);
  CHECK_FALSE(a.text.has_value());
}

TEST_CASE("pretrained speech encoder separates train speakers") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  cfg.steps = 300;
  ClassifierPretrainResult r = PretrainSpeechEncoder(corpus, cfg);
  CHECK(r.log.back().total < r.log.front().total);
  double same = 0, diff = 0;
  int ns = 0, nd = 0;
  for (int a : corpus.TrainIds())
    for (int b : corpus.TrainIds()) {
      const double c =
          CosineSimilarity(r.encoder.Encode(corpus.speech[a][0].feature).values,
                           r.encoder.Encode(corpus.speech[b][1].feature).values);
      (a == b ? same : diff) += c;
      (a == b ? ns : nd) += 1;
    }
  CHECK(same / ns > diff / nd);
}

TEST_CASE("each stage lowers its loss") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  cfg.steps = 200;
  cfg.log_every = 50;
  ModelBundle b;
  for (int stage = 0; stage < 3; ++stage) {
    std::vector<TrainLogEntry> log;
    RunStage(stage, corpus, cfg, &b, &log);
    REQUIRE(log.size() >= 2);
    CHECK(log.back().step == cfg.steps - 1);
    if (stage == 0) {
      // Speech encoder then face teacher, each with its own trace.
      const size_t half = log.size() / 2;
      CHECK(log[half - 1].total < log[0].total);
      CHECK(log.back().total < log[half].total);
    } else {
      CHECK(log.back().total < log.front().total);
    }
    for (const TrainLogEntry &e : log) CHECK(e.stage == stage);
  }
}

TEST_CASE("stage 1 without distillation and alignment is face classification") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  cfg.loss.gamma = 0;
  cfg.loss.alpha = 0;
  cfg.alignment_weight = 0;
  const ModelBundle base = TrainTiny(corpus, cfg, 0);

  auto run = [&](const TrainConfig &c) {
    ModelBundle b = base;
    std::vector<TrainLogEntry> log;
    RunStage(1, corpus, c, &b, &log);
    return std::make_pair(b, log);
  };
  const auto [plain, log] = run(cfg);
  for (const TrainLogEntry &e : log) CHECK(e.total == e.ce);

  // The distillation and alignment hyperparameters no longer matter.
  TrainConfig shifted = cfg;
  shifted.loss.beta = 0.7;
  shifted.loss.mu = 0.3;
  shifted.loss.tau = 0.5;
  shifted.loss.kd_penalty = KdPenalty::kSquared;
  const auto [other, other_log] = run(shifted);
  CHECK(*other.face == *plain.face);
  CHECK(*other.classifier == *plain.classifier);
  REQUIRE(other_log.size() == log.size());
  for (size_t i = 0; i < log.size(); ++i) CHECK(other_log[i].total == log[i].total);
}

TEST_CASE("ablations change the stage-1 objective") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  const ModelBundle base = TrainTiny(corpus, cfg, 0);
  for (Ablation a : {Ablation::kNoKd, Ablation::kNoCe}) {
    TrainConfig c = cfg;
    c.ablation = a;
    ModelBundle b = base;
    std::vector<TrainLogEntry> log;
    RunStage(1, corpus, c, &b, &log);
    for (const TrainLogEntry &e : log) {
      const Stage1Weights w = c.EffectiveStage1Weights();
      CHECK(e.total == doctest::Approx(w.ce * e.ce + w.kd * e.kd + w.alignment * e.cl));
    }
  }
  cfg.ablation = Ablation::kNoKd;
  CHECK(cfg.EffectiveStage1Weights().kd == 0.0);
}

TEST_CASE("text stage pair toggles") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  const ModelBundle b = TrainTiny(corpus, cfg, 1);
  const TeacherEncoder speech(*b.speech), face(*b.face);
  const TeacherEncoder stand_in(*b.face_teacher);

  cfg.text_pairs = TextPairs::kFaceOnly;
  const TextEncoder face_only = TrainTextEncoder(corpus, speech, face, cfg).text;
  CHECK(TrainTextEncoder(corpus, stand_in, face, cfg).text == face_only);

  cfg.text_pairs = TextPairs::kSpeechOnly;
  const TextEncoder speech_only = TrainTextEncoder(corpus, speech, face, cfg).text;
  CHECK(TrainTextEncoder(corpus, speech, stand_in, cfg).text == speech_only);
  CHECK_FALSE(speech_only == face_only);

  cfg.text_pairs = TextPairs::kBoth;
  const TextEncoder both = TrainTextEncoder(corpus, speech, face, cfg).text;
  CHECK_FALSE(both == speech_only);
  CHECK_FALSE(both == InitialTextEncoder(cfg));
  CHECK(std::isfinite(TextValidationLoss(corpus, *b.speech, *b.face, both, cfg.loss)));
}

TEST_CASE("divergence raises a training error") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  TrainConfig cfg = TinyTrainConfig();
  cfg.learning_rate = 1e300;
  ModelBundle b;
  try {
    RunStage(0, corpus, cfg, &b, nullptr);
    FAIL("expected TrainingError");
  } catch (const TrainingError &e) {
    CHECK(e.stage() == 0);
    CHECK(e.step() >= 0);
  }
}

TEST_CASE("embed any routes by modality") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  const ModelBundle b = TrainTiny(corpus, TinyTrainConfig(), 2);
  const Observation &s = corpus.speech[3][0];
  const Observation &f = corpus.face[3][0];
  const PromptTokens &p = corpus.prompts[3][0];
  CHECK(EmbedAny(b, s).values == b.speech->Encode(s.feature).values);
  CHECK(EmbedAny(b, f).values == b.face->Encode(f.feature).values);
  CHECK(EmbedAny(b, p).values == b.text->Encode(p.tokens).values);
  for (const Embedding &e : {EmbedAny(b, s), EmbedAny(b, f), EmbedAny(b, p)}) {
    double norm = 0;
    for (double x : e.values) norm += x * x;
    CHECK(std::abs(norm - 1.0) < 1e-12);
  }
  CHECK(EmbedAny(b, p).values == EmbedAny(b, p).values);

  ModelBundle no_face = b;
  no_face.face.reset();
  CHECK_THROWS_AS(EmbedAny(no_face, f), StateError);
}

TEST_CASE("bundle round trip and corruption") {
  const Corpus corpus = GenerateCorpus(TinyCorpusConfig());
  const ModelBundle stage1 = TrainTiny(corpus, TinyTrainConfig(), 1);
  const fs::path dir = ScratchDir("bundle");
  SaveBundle(dir, stage1, nlohmann::json{{"note", "x"}});
  const ModelBundle back = LoadBundle(dir);
  CHECK(back == stage1);
  CHECK(BundleFingerprint(back) == BundleFingerprint(stage1));
  CHECK(ReadBundleManifest(dir)["note"] == "x");
  CHECK_THROWS_AS(EmbedAny(back, corpus.prompts[0][0]), StateError);

  const std::string face = ReadFile(dir / "face.enc");
  std::string flipped = face;
  flipped[0] ^= 0x5a;
  WriteFile(dir / "face.enc", flipped);
  CHECK_THROWS_AS(LoadBundle(dir), FormatError);
  WriteFile(dir / "face.enc", face.substr(0, face.size() / 2));
  CHECK_THROWS_AS(LoadBundle(dir), FormatError);
  WriteFile(dir / "face.enc", face);
  CHECK(LoadBundle(dir) == stage1);

  nlohmann::json manifest = ReadBundleManifest(dir);
  manifest["format_version"] = kBundleFormatVersion + 1;
  WriteFile(dir / "manifest.json", manifest.dump());
  CHECK_THROWS_AS(LoadBundle(dir), FormatError);

  CHECK_THROWS_AS(LoadBundle(ScratchDir("missing")), StateError);
  fs::remove_all(dir);
}
