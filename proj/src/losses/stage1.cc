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

#include <string>

#include "mmspk/losses/losses.h"
#include "mmspk/numerics/errors.h"

namespace mmspk {

namespace {

void AddScaled(double scale, const EmbeddingBatch &src, EmbeddingBatch *dst) {
  for (size_t i = 0; i < src.size(); ++i) Axpy(scale, src[i], (*dst)[i]);
}

}  // namespace

const char *AblationName(Ablation a) {
  switch (a) {
    case Ablation::kNone:
      return "none";
    case Ablation::kNoCe:
      return "no-ce";
    case Ablation::kNoKd:
      return "no-kd";
    case Ablation::kNoCl:
      return "no-cl";
  }
  return "none";
}

Ablation ParseAblation(std::string_view name) {
  if (name == "none" || name.empty()) return Ablation::kNone;
  if (name == "no-ce") return Ablation::kNoCe;
  if (name == "no-kd") return Ablation::kNoKd;
  if (name == "no-cl") return Ablation::kNoCl;
  throw ConfigError("unknown ablation '" + std::string(name) +
                    "' (expected none, no-ce, no-kd or no-cl)");
}

Stage1Weights WeightsForAblation(const LossConfig &cfg, Ablation ablation) {
  Stage1Weights w;
  w.kd = cfg.gamma;
  switch (ablation) {
    case Ablation::kNone:
      break;
    case Ablation::kNoCe:
      w.ce = 0.0;
      break;
    case Ablation::kNoKd:
      w.kd = 0.0;
      break;
    case Ablation::kNoCl:
      w.alignment_kind = AlignmentKind::kCosine;
      break;
  }
  return w;
}

Stage1Result Stage1Loss(const Stage1Batch &batch, const LossConfig &cfg,
                        const Stage1Weights &weights) {
  if (batch.speech == nullptr || batch.face == nullptr ||
      batch.weights == nullptr || batch.fused == nullptr)
    throw StateError("Stage1Loss: incomplete batch");
  const EmbeddingBatch &speech = *batch.speech;
  const EmbeddingBatch &face = *batch.face;
  const size_t n = face.size();
  if (speech.size() != n || batch.labels.size() != n)
    throw ShapeError("Stage1Loss: speech, face and labels differ in size");
  const size_t d = n > 0 ? face[0].size() : 0;

  Stage1Result r;
  r.grad_speech.assign(n, Vector(d, 0.0));
  r.grad_face.assign(n, Vector(d, 0.0));
  r.grad_weights = Matrix(batch.weights->dim(), batch.weights->classes());

  SharedClassifierResult ce = SharedWeightCeLoss(
      speech, batch.labels, face, batch.labels, *batch.weights, cfg);
  r.ce = ce.loss;
  AddScaled(weights.ce, ce.grad_speech, &r.grad_speech);
  AddScaled(weights.ce, ce.grad_face, &r.grad_face);
  Axpy(weights.ce, ce.grad_weights.data(), r.grad_weights.data());

  KdResult kd = KdLoss(*batch.fused, speech, face, cfg.beta, cfg.kd_penalty);
  r.kd = kd.loss;
  AddScaled(weights.kd, kd.grad_speech, &r.grad_speech);
  AddScaled(weights.kd, kd.grad_face, &r.grad_face);

  ContrastiveResult align =
      weights.alignment_kind == AlignmentKind::kContrastive
          ? ContrastiveLoss(speech, face, batch.labels, cfg.tau)
          : CosineAlignmentLoss(speech, face);
  r.alignment = align.loss;
  AddScaled(weights.alignment, align.grad_anchors, &r.grad_speech);
  AddScaled(weights.alignment, align.grad_candidates, &r.grad_face);

  r.total = weights.ce * r.ce + weights.kd * r.kd +
            weights.alignment * r.alignment;
  return r;
}

}  // namespace mmspk
