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

// Runs stage 0 and stage 1 (full and ablated) for a few seeds and prints the
// held-out cross-modal EER of each variant next to the untrained baseline.
//
//   mmspk_calibrate [--seeds N] [--steps N] [--noise X] [--nuisance X]

#include <algorithm>
#include <chrono>
#include <map>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mmspk/eval/evaluate.h"
#include "mmspk/pipeline/training.h"

int main(int argc, char **argv) {
  using namespace mmspk;
  CLI::App app{"stage-1 calibration sweep"};
  int seeds = 1, steps = 5000;
  CorpusConfig corpus_cfg;
  TrainConfig train;
  std::vector<std::string> ablations{"none", "no-kd", "no-ce", "no-cl"};
  bool stage2 = false;
  app.add_option("--seeds", seeds);
  app.add_option("--steps", steps);
  app.add_option("--noise", corpus_cfg.noise_scale);
  app.add_option("--nuisance", corpus_cfg.nuisance_scale);
  app.add_option("--latent", corpus_cfg.latent_dim);
  app.add_option("--obs", corpus_cfg.observations_per_speaker);
  app.add_option("--attr", corpus_cfg.attribute_weight);
  app.add_option("--lr", train.learning_rate);
  app.add_option("--hidden", train.hidden_dim);
  app.add_option("--augment", train.augment_strength);
  app.add_option("--ablations", ablations);
  app.add_flag("--stage2", stage2);
  CLI11_PARSE(app, argc, argv);
  train.steps = steps;

  std::map<std::string, std::vector<double>> eers;
  for (int seed = 1; seed <= seeds; ++seed) {
    corpus_cfg.seed = static_cast<uint64_t>(seed);
    train.seed = static_cast<uint64_t>(seed);
    const Corpus corpus = GenerateCorpus(corpus_cfg);
    auto t0 = std::chrono::steady_clock::now();
    ModelBundle bundle;
    RunStage(0, corpus, train, &bundle, nullptr);
    auto t1 = std::chrono::steady_clock::now();
    TrialConfig trials;
    const double untrained = CrossModalEer(
        corpus, *bundle.speech,
        InitialFaceStudent(TeacherEncoder(*bundle.face_teacher)), trials);
    std::printf("seed %d stage0 %.1fs untrained %.4f\n", seed,
                std::chrono::duration<double>(t1 - t0).count(), untrained);
    for (const std::string &name : ablations) {
      TrainConfig cfg = train;
      cfg.ablation = ParseAblation(name);
      ModelBundle b = bundle;
      std::vector<TrainLogEntry> log;
      auto s0 = std::chrono::steady_clock::now();
      RunStage(1, corpus, cfg, &b, &log);
      auto s1 = std::chrono::steady_clock::now();
      const double eer = CrossModalEer(corpus, *b.speech, *b.face, trials);
      eers[name].push_back(eer);
      std::printf("  %-6s eer %.4f  total %.4g -> %.4g  (%.1fs)\n", name.c_str(),
                  eer,
                  log.front().total, log.back().total,
                  std::chrono::duration<double>(s1 - s0).count());
      if (stage2 && name == "none") {
        auto u0 = std::chrono::steady_clock::now();
        TextEncoder init = InitialTextEncoder(cfg);
        const double acc0 = PromptRetrievalAccuracy(corpus, *b.speech, init);
        const double val0 =
            TextValidationLoss(corpus, *b.speech, *b.face, init, cfg.loss);
        RunStage(2, corpus, cfg, &b, &log);
        auto u1 = std::chrono::steady_clock::now();
        std::printf("  text   top1 %.4f -> %.4f  val %.4g -> %.4g  (%.1fs)\n",
                    acc0, PromptRetrievalAccuracy(corpus, *b.speech, *b.text),
                    val0,
                    TextValidationLoss(corpus, *b.speech, *b.face, *b.text,
                                       cfg.loss),
                    std::chrono::duration<double>(u1 - u0).count());
      }
    }
  }
  for (auto &[name, v] : eers) {
    std::sort(v.begin(), v.end());
    std::printf("median %-6s %.4f\n", name.c_str(), v[v.size() / 2]);
  }
  return 0;
}
