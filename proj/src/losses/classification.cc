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
#include <string>

#include "mmspk/losses/losses.h"
#include "mmspk/numerics/errors.h"

namespace mmspk {

namespace {

void RequireUnitColumns(const Matrix &w) {
  for (size_t c = 0; c < w.cols(); ++c) {
    double norm = 0.0;
    for (size_t r = 0; r < w.rows(); ++r) norm += w(r, c) * w(r, c);
    norm = std::sqrt(norm);
    if (!(std::abs(norm - 1.0) <= 1e-6))
      throw ContractError("classifier column " + std::to_string(c) +
                          " has norm " + std::to_string(norm));
  }
}

}  // namespace

MarginSoftmaxResult AdditiveMarginLoss(const EmbeddingBatch &features,
                                       std::span<const int> labels,
                                       const ClassifierWeights &weights,
                                       double scale, double margin) {
  const Matrix &w = weights.matrix();
  const size_t n = features.size();
  const size_t c = w.cols();
  if (n == 0) throw DegenerateInputError("AdditiveMarginLoss: empty batch");
  if (labels.size() != n)
    throw ShapeError("AdditiveMarginLoss: labels and features differ in size");
  for (const Vector &f : features)
    if (f.size() != w.rows())
      throw ShapeError("AdditiveMarginLoss: feature dim != classifier dim");
  for (int y : labels)
    if (y < 0 || static_cast<size_t>(y) >= c)
      throw DomainError("AdditiveMarginLoss: label " + std::to_string(y) +
                        " outside [0, " + std::to_string(c) + ")");
  RequireUnitRows(features, "AdditiveMarginLoss features");
  RequireUnitColumns(w);

  MarginSoftmaxResult r;
  r.grad_features.assign(n, Vector(w.rows(), 0.0));
  r.grad_weights = Matrix(w.rows(), c);
  const double inv_n = 1.0 / static_cast<double>(n);

  Vector logits(c);
  for (size_t i = 0; i < n; ++i) {
    const Vector &f = features[i];
    const size_t y = static_cast<size_t>(labels[i]);
    Vector cosines = MatTVec(w, f);
    for (size_t j = 0; j < c; ++j)
      logits[j] = scale * (cosines[j] - (j == y ? margin : 0.0));
    const double lse = LogSumExp(logits);
    r.loss += (lse - logits[y]) * inv_n;

    // dL/dz_j = (softmax_j - [j == y]) / n; z_j = s * W_j . f - const.
    for (size_t j = 0; j < c; ++j) {
      const double dz =
          (std::exp(logits[j] - lse) - (j == y ? 1.0 : 0.0)) * inv_n * scale;
      if (dz == 0.0) continue;
      for (size_t k = 0; k < w.rows(); ++k) {
        r.grad_features[i][k] += dz * w(k, j);
        r.grad_weights(k, j) += dz * f[k];
      }
    }
  }
  return r;
}

SharedClassifierResult SharedWeightCeLoss(const EmbeddingBatch &speech,
                                          std::span<const int> speech_labels,
                                          const EmbeddingBatch &face,
                                          std::span<const int> face_labels,
                                          const ClassifierWeights &weights,
                                          const LossConfig &cfg) {
  MarginSoftmaxResult s = AdditiveMarginLoss(speech, speech_labels, weights,
                                             cfg.scale, cfg.margin);
  MarginSoftmaxResult f =
      AdditiveMarginLoss(face, face_labels, weights, cfg.scale, cfg.margin);
  SharedClassifierResult r;
  r.speech_loss = s.loss;
  r.face_loss = f.loss;
  r.loss = cfg.alpha * s.loss + f.loss;
  r.grad_speech = std::move(s.grad_features);
  for (Vector &g : r.grad_speech)
    for (double &x : g) x *= cfg.alpha;
  r.grad_face = std::move(f.grad_features);
  r.grad_weights = std::move(f.grad_weights);
  Axpy(cfg.alpha, s.grad_weights.data(), r.grad_weights.data());
  return r;
}

}  // namespace mmspk
