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

// Penalty value and its derivative with respect to the residual.
struct Penalized {
  double value;
  double slope;
};

Penalized Penalize(double residual, KdPenalty penalty) {
  if (penalty == KdPenalty::kSquared) return {residual * residual, 2 * residual};
  const double slope = residual > 0.0 ? 1.0 : (residual < 0.0 ? -1.0 : 0.0);
  return {std::abs(residual), slope};
}

}  // namespace

SimilarityMatrix TeacherSimilarity(const EmbeddingBatch &teacher_embeddings,
                                   SimilaritySource source) {
  const size_t n = teacher_embeddings.size();
  if (n < 2)
    throw DegenerateInputError("TeacherSimilarity: need at least 2 embeddings");
  SimilarityMatrix s{Matrix(n, n), source};
  for (size_t i = 0; i < n; ++i) {
    s.values(i, i) =
        CosineSimilarity(teacher_embeddings[i], teacher_embeddings[i]);
    for (size_t j = i + 1; j < n; ++j) {
      const double c =
          CosineSimilarity(teacher_embeddings[i], teacher_embeddings[j]);
      s.values(i, j) = c;
      s.values(j, i) = c;
    }
  }
  return s;
}

SimilarityMatrix FuseSimilarity(const SimilarityMatrix &speech,
                                const SimilarityMatrix &face, double mu) {
  if (!(mu > 0.0 && mu < 1.0))
    throw DomainError("FuseSimilarity: mu must lie strictly inside (0, 1)");
  if (!speech.values.SameShape(face.values))
    throw ShapeError("FuseSimilarity: similarity tables differ in shape");
  SimilarityMatrix fused{Matrix(speech.size(), speech.size()),
                         SimilaritySource::kFused};
  auto a = speech.values.data();
  auto b = face.values.data();
  auto out = fused.values.data();
  for (size_t k = 0; k < out.size(); ++k)
    out[k] = mu * a[k] + (1.0 - mu) * b[k];
  return fused;
}

KdResult KdLoss(const SimilarityMatrix &fused, const EmbeddingBatch &speech,
                const EmbeddingBatch &face, double beta, KdPenalty penalty) {
  const size_t n = fused.size();
  if (fused.values.cols() != n || speech.size() != n || face.size() != n)
    throw ShapeError("KdLoss: similarity table is " + std::to_string(n) + "x" +
                     std::to_string(fused.values.cols()) + " but batches are " +
                     std::to_string(speech.size()) + " and " +
                     std::to_string(face.size()));
  RequireUnitRows(speech, "KdLoss speech");
  RequireUnitRows(face, "KdLoss face");

  KdResult r;
  const size_t d = n > 0 ? face[0].size() : 0;
  r.grad_speech.assign(n, Vector(d, 0.0));
  r.grad_face.assign(n, Vector(d, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double target = fused.values(i, j);

      Penalized cross = Penalize(target - Dot(speech[i], face[j]), penalty);
      r.cross_term += cross.value;
      if (cross.slope != 0.0) {
        // d/d(cos) of pen(S - cos) = -slope
        Axpy(-cross.slope, speech[i], r.grad_face[j]);
        Axpy(-cross.slope, face[j], r.grad_speech[i]);
      }

      Penalized intra = Penalize(target - Dot(face[i], face[j]), penalty);
      r.intra_term += intra.value;
      if (intra.slope != 0.0 && beta != 0.0) {
        Axpy(-beta * intra.slope, face[j], r.grad_face[i]);
        Axpy(-beta * intra.slope, face[i], r.grad_face[j]);
      }
    }
  }
  r.loss = r.cross_term + beta * r.intra_term;
  return r;
}

}  // namespace mmspk
