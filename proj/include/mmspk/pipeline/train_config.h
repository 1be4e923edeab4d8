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

#ifndef MMSPK_PIPELINE_TRAIN_CONFIG_H_
#define MMSPK_PIPELINE_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "mmspk/losses/losses.h"

namespace mmspk {

// Which pairs stage 2 draws each step.
enum class TextPairs { kBoth, kSpeechOnly, kFaceOnly };

const char *TextPairsName(TextPairs p);
TextPairs ParseTextPairs(std::string_view name);

struct TrainConfig {
  int steps = 5000;  // per stage
  int batch_size = 32;
  double learning_rate = 0.0002;
  uint64_t seed = 1;
  int embedding_dim = 16;
  int hidden_dim = 64;
  int text_width = 32;
  int log_every = 250;
  double augment_strength = 0.5;  // face augmentation in stage 1
  double grad_clip = 0.0;         // global L2 norm; 0 disables
  double alignment_weight = 1.0;  // multiplies the stage-1 alignment term
  TextPairs text_pairs = TextPairs::kBoth;
  Ablation ablation = Ablation::kNone;
  LossConfig loss;

  // Throws ConfigError.
  void Validate() const;
  // Weights of the stage-1 composite after applying the ablation and
  // alignment_weight.
  Stage1Weights EffectiveStage1Weights() const;
};

nlohmann::json LossConfigToJson(const LossConfig &c);
void LossConfigFromJson(const nlohmann::json &j, LossConfig *c);

// The loss section is not part of this object; see RunConfig.
nlohmann::json TrainConfigToJson(const TrainConfig &c);
void TrainConfigFromJson(const nlohmann::json &j, TrainConfig *c);

// One line of the training log.
struct TrainLogEntry {
  int stage = 0;
  int step = 0;
  double ce = 0.0;
  double kd = 0.0;
  double cl = 0.0;
  double total = 0.0;
};

nlohmann::json LogEntryToJson(const TrainLogEntry &e);

}  // namespace mmspk

#endif  // MMSPK_PIPELINE_TRAIN_CONFIG_H_
