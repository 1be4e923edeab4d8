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

#include "mmspk/pipeline/train_config.h"

#include "mmspk/numerics/errors.h"
#include "mmspk/util/json_fields.h"

namespace mmspk {

using nlohmann::json;

const char *TextPairsName(TextPairs p) {
  switch (p) {
    case TextPairs::kBoth:
      return "both";
    case TextPairs::kSpeechOnly:
      return "speech";
    case TextPairs::kFaceOnly:
      return "face";
  }
  return "both";
}

TextPairs ParseTextPairs(std::string_view name) {
  if (name == "both") return TextPairs::kBoth;
  if (name == "speech") return TextPairs::kSpeechOnly;
  if (name == "face") return TextPairs::kFaceOnly;
  throw ConfigError("train.text_pairs must be one of both, speech, face; got '" +
                    std::string(name) + "'");
}

void TrainConfig::Validate() const {
  if (steps <= 0) throw ConfigError("train.steps must be > 0");
  if (batch_size < 2) throw ConfigError("train.batch_size must be >= 2");
  if (!(learning_rate > 0.0))
    throw ConfigError("train.learning_rate must be > 0");
  if (embedding_dim < 2) throw ConfigError("train.embedding_dim must be >= 2");
  if (hidden_dim < 1) throw ConfigError("train.hidden_dim must be >= 1");
  if (text_width < 1) throw ConfigError("train.text_width must be >= 1");
  if (log_every < 1) throw ConfigError("train.log_every must be >= 1");
  if (!(augment_strength >= 0.0))
    throw ConfigError("train.augment_strength must be >= 0");
  if (!(grad_clip >= 0.0)) throw ConfigError("train.grad_clip must be >= 0");
  if (!(alignment_weight >= 0.0))
    throw ConfigError("train.alignment_weight must be >= 0");
  loss.Validate();
}

Stage1Weights TrainConfig::EffectiveStage1Weights() const {
  Stage1Weights w = WeightsForAblation(loss, ablation);
  w.alignment *= alignment_weight;
  return w;
}

json LossConfigToJson(const LossConfig &c) {
  return json{{"alpha", c.alpha},
              {"margin", c.margin},
              {"scale", c.scale},
              {"mu", c.mu},
              {"beta", c.beta},
              {"tau", c.tau},
              {"gamma", c.gamma},
              {"kd_penalty",
               c.kd_penalty == KdPenalty::kAbsolute ? "absolute" : "squared"}};
}

void LossConfigFromJson(const json &j, LossConfig *c) {
  JsonFields f(j, "loss");
  f.Get("alpha", &c->alpha);
  f.Get("margin", &c->margin);
  f.Get("scale", &c->scale);
  f.Get("mu", &c->mu);
  f.Get("beta", &c->beta);
  f.Get("tau", &c->tau);
  f.Get("gamma", &c->gamma);
  std::string penalty;
  f.Get("kd_penalty", &penalty);
  if (penalty == "absolute") {
    c->kd_penalty = KdPenalty::kAbsolute;
  } else if (penalty == "squared") {
    c->kd_penalty = KdPenalty::kSquared;
  } else if (!penalty.empty()) {
    throw ConfigError("loss.kd_penalty must be absolute or squared");
  }
  f.Finish();
  c->Validate();
}

json TrainConfigToJson(const TrainConfig &c) {
  return json{{"steps", c.steps},
              {"batch_size", c.batch_size},
              {"learning_rate", c.learning_rate},
              {"seed", c.seed},
              {"embedding_dim", c.embedding_dim},
              {"hidden_dim", c.hidden_dim},
              {"text_width", c.text_width},
              {"log_every", c.log_every},
              {"augment_strength", c.augment_strength},
              {"grad_clip", c.grad_clip},
              {"alignment_weight", c.alignment_weight},
              {"text_pairs", TextPairsName(c.text_pairs)},
              {"ablation", AblationName(c.ablation)}};
}

void TrainConfigFromJson(const json &j, TrainConfig *c) {
  JsonFields f(j, "train");
  f.Get("steps", &c->steps);
  f.Get("batch_size", &c->batch_size);
  f.Get("learning_rate", &c->learning_rate);
  f.Get("seed", &c->seed);
  f.Get("embedding_dim", &c->embedding_dim);
  f.Get("hidden_dim", &c->hidden_dim);
  f.Get("text_width", &c->text_width);
  f.Get("log_every", &c->log_every);
  f.Get("augment_strength", &c->augment_strength);
  f.Get("grad_clip", &c->grad_clip);
  f.Get("alignment_weight", &c->alignment_weight);
  std::string name;
  f.Get("text_pairs", &name);
  if (!name.empty()) c->text_pairs = ParseTextPairs(name);
  name.clear();
  f.Get("ablation", &name);
  if (!name.empty()) c->ablation = ParseAblation(name);
  f.Finish();
}

json LogEntryToJson(const TrainLogEntry &e) {
  return json{{"stage", e.stage}, {"step", e.step}, {"ce", e.ce},
              {"kd", e.kd},       {"cl", e.cl},     {"total", e.total}};
}

}  // namespace mmspk
