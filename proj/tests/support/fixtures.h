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

#ifndef MMSPK_TESTS_SUPPORT_FIXTURES_H_
#define MMSPK_TESTS_SUPPORT_FIXTURES_H_

#include "mmspk/pipeline/bundle.h"
#include "mmspk/pipeline/train_config.h"
#include "mmspk/synthdata/corpus.h"

namespace mmspk::testing {

// 12 train and 6 held-out speakers, 4 observations and 3 prompts each.
CorpusConfig TinyCorpusConfig();
// A few dozen steps at batch 8.
TrainConfig TinyTrainConfig();
// Runs stages 0 through `last_stage` on `corpus`.
ModelBundle TrainTiny(const Corpus &corpus, const TrainConfig &cfg,
                      int last_stage);

}  // namespace mmspk::testing

#endif  // MMSPK_TESTS_SUPPORT_FIXTURES_H_
