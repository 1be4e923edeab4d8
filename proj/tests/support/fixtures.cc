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

#include "support/fixtures.h"

#include "mmspk/pipeline/training.h"

namespace mmspk::testing {

CorpusConfig TinyCorpusConfig() {
  CorpusConfig c;
  c.train_speakers = 12;
  c.heldout_speakers = 6;
  c.observations_per_speaker = 4;
  c.prompts_per_speaker = 3;
  c.seed = 5;
  return c;
}

TrainConfig TinyTrainConfig() {
  TrainConfig t;
  t.steps = 40;
  t.batch_size = 8;
  t.log_every = 10;
  t.learning_rate = 0.002;
  t.seed = 3;
  return t;
}

ModelBundle TrainTiny(const Corpus &corpus, const TrainConfig &cfg,
                      int last_stage) {
  ModelBundle b;
  for (int stage = 0; stage <= last_stage; ++stage)
    RunStage(stage, corpus, cfg, &b, nullptr);
  return b;
}

}  // namespace mmspk::testing
