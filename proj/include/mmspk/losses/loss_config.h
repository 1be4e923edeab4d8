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

#ifndef MMSPK_LOSSES_LOSS_CONFIG_H_
#define MMSPK_LOSSES_LOSS_CONFIG_H_

#include <span>
#include <vector>

#include "mmspk/numerics/matrix.h"
#include "mmspk/numerics/random.h"

namespace mmspk {

// Penalty applied to each similarity residual in the distillation loss.
enum class KdPenalty { kAbsolute, kSquared };
// Hyperparameters of the alignment objectives.
struct LossConfig {
  double alpha = 0.1;   // weight of the speech branch of the classifier loss
  double margin = 0.2;  // additive margin on the true-class cosine
  double scale = 30.0;  // logit scale
  double mu = 0.8;      // speech-teacher share of the fused similarity
  double beta = 0.1;    // weight of the face-face distillation term
  double tau = 0.1;     // contrastive temperature
  double gamma = 10.0;  // weight of the distillation loss in the total
  KdPenalty kd_penalty = KdPenalty::kAbsolute;

  // Throws ConfigError when a value violates its range.
  void Validate() const;
};

using EmbeddingBatch = std::vector<Vector>;

// Throws ContractError if any row deviates from unit norm by more than tol.
void RequireUnitRows(const EmbeddingBatch &batch, const char *what,
                     double tol = 1e-6);

// Shared classifier W, d x c, one unit-norm column per training speaker.
class ClassifierWeights {
 public:
  ClassifierWeights() = default;
  explicit ClassifierWeights(Matrix w);
  static ClassifierWeights Random(size_t dim, size_t classes, Rng *rng);

  size_t dim() const { return w_.rows(); }
  size_t classes() const { return w_.cols(); }
  const Matrix &matrix() const { return w_; }
  Matrix *mutable_matrix() { return &w_; }

  // Projects every column back onto the unit sphere.
  void Renormalize();

  friend bool operator==(const ClassifierWeights &,
                         const ClassifierWeights &) = default;

 private:
  Matrix w_;
};

}  // namespace mmspk

#endif  // MMSPK_LOSSES_LOSS_CONFIG_H_
