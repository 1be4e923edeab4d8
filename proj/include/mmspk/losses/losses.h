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

#ifndef MMSPK_LOSSES_LOSSES_H_
#define MMSPK_LOSSES_LOSSES_H_

#include <span>
#include <vector>

#include "mmspk/encoders/modality.h"
#include "mmspk/losses/loss_config.h"

namespace mmspk {

// ---------------------------------------------------------------------------
// Additive-margin softmax with a classifier shared between modalities.
//
// For one modality with unit features f_i and unit columns W_j:
//   z_ij = s * (W_j . f_i - m [j == y_i])
//   L    = (1/n) sum_i ( logsumexp_j z_ij - z_i,y_i )
// The shared-weight loss is alpha * L(speech) + L(face).

struct MarginSoftmaxResult {
  double loss = 0.0;
  EmbeddingBatch grad_features;
  Matrix grad_weights;
};

// Throws DomainError for labels outside [0, classes), ContractError for
// non-unit features or columns, DegenerateInputError for an empty batch.
MarginSoftmaxResult AdditiveMarginLoss(const EmbeddingBatch &features,
                                       std::span<const int> labels,
                                       const ClassifierWeights &weights,
                                       double scale, double margin);

struct SharedClassifierResult {
  double loss = 0.0;
  double speech_loss = 0.0;
  double face_loss = 0.0;
  EmbeddingBatch grad_speech;
  EmbeddingBatch grad_face;
  Matrix grad_weights;
};

SharedClassifierResult SharedWeightCeLoss(const EmbeddingBatch &speech,
                                          std::span<const int> speech_labels,
                                          const EmbeddingBatch &face,
                                          std::span<const int> face_labels,
                                          const ClassifierWeights &weights,
                                          const LossConfig &cfg);

// ---------------------------------------------------------------------------
// Relational distillation.

enum class SimilaritySource { kSpeechTeacher, kFaceTeacher, kFused };

struct SimilarityMatrix {
  Matrix values;  // n x n
  SimilaritySource source = SimilaritySource::kFused;

  size_t size() const { return values.rows(); }
};

// Pairwise cosine table of one teacher's batch. Requires n >= 2.
SimilarityMatrix TeacherSimilarity(const EmbeddingBatch &teacher_embeddings,
                                   SimilaritySource source);

// mu * speech + (1 - mu) * face, entrywise. mu must lie in (0, 1).
SimilarityMatrix FuseSimilarity(const SimilarityMatrix &speech,
                                const SimilarityMatrix &face, double mu);

struct KdResult {
  double loss = 0.0;
  double cross_term = 0.0;  // sum |S_ij - cos(speech_i, face_j)|
  double intra_term = 0.0;  // sum |S_ij - cos(face_i, face_j)|, unweighted
  EmbeddingBatch grad_speech;
  EmbeddingBatch grad_face;
};

// L = sum_ij pen(S_ij - cos(f1_i, f2_j)) + beta * pen(S_ij - cos(f2_i, f2_j))
// summed over all n^2 pairs without normalisation. For the absolute penalty
// the subgradient at an exactly-zero residual is 0.
KdResult KdLoss(const SimilarityMatrix &fused, const EmbeddingBatch &speech,
                const EmbeddingBatch &face, double beta,
                KdPenalty penalty = KdPenalty::kAbsolute);

// ---------------------------------------------------------------------------
// Contrastive alignment.

struct ContrastiveResult {
  double loss = 0.0;
  EmbeddingBatch grad_anchors;
  EmbeddingBatch grad_candidates;
};

// Anchor i (speech) against positive candidate i (face) and negatives
// N_i = { candidates j : labels[j] != labels[i] }:
//   L = sum_i -log( e^{c_ii/tau} / (e^{c_ii/tau} + sum_{j in N_i} e^{c_ij/tau}) )
// Throws DegenerateInputError when every N_i is empty.
ContrastiveResult ContrastiveLoss(const EmbeddingBatch &anchors,
                                  const EmbeddingBatch &candidates,
                                  std::span<const int> labels, double tau);

// Text anchors against speech or face positives. Negatives for anchor i
// are drawn only from candidates whose modality matches candidate i.
ContrastiveResult TextAlignmentLoss(const EmbeddingBatch &text,
                                    const EmbeddingBatch &candidates,
                                    std::span<const Modality> modalities,
                                    std::span<const int> labels, double tau);

// sum_i (1 - cos(anchor_i, candidate_i)). Stand-in alignment term for the
// "without contrastive loss" ablation.
ContrastiveResult CosineAlignmentLoss(const EmbeddingBatch &anchors,
                                      const EmbeddingBatch &candidates);

// ---------------------------------------------------------------------------
// Face-stage composite: ce_weight * L_ce + kd_weight * L_kd + align_weight *
// L_align. With the default weights (1, gamma, 1) and contrastive alignment
// this is the full face-encoder objective.

enum class AlignmentKind { kContrastive, kCosine };

enum class Ablation { kNone, kNoCe, kNoKd, kNoCl };

const char *AblationName(Ablation a);
// Accepts "none", "no-ce", "no-kd", "no-cl". Throws ConfigError.
Ablation ParseAblation(std::string_view name);

struct Stage1Weights {
  double ce = 1.0;
  double kd = 10.0;
  double alignment = 1.0;
  AlignmentKind alignment_kind = AlignmentKind::kContrastive;
};

// Weights for an ablation: no-ce zeroes ce, no-kd zeroes kd (gamma
// effectively 0), no-cl swaps contrastive for cosine alignment.
Stage1Weights WeightsForAblation(const LossConfig &cfg, Ablation ablation);

struct Stage1Batch {
  const EmbeddingBatch *speech = nullptr;  // f1, frozen
  const EmbeddingBatch *face = nullptr;    // f2, trained
  std::span<const int> labels;             // shared by pair i
  const ClassifierWeights *weights = nullptr;
  const SimilarityMatrix *fused = nullptr;
};

struct Stage1Result {
  double total = 0.0;
  double ce = 0.0;
  double kd = 0.0;
  double alignment = 0.0;
  EmbeddingBatch grad_speech;
  EmbeddingBatch grad_face;
  Matrix grad_weights;
};

Stage1Result Stage1Loss(const Stage1Batch &batch, const LossConfig &cfg,
                        const Stage1Weights &weights);

}  // namespace mmspk

#endif  // MMSPK_LOSSES_LOSSES_H_
