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

#include "mmspk/losses/loss_config.h"

#include <cmath>
#include <string>

#include "mmspk/numerics/errors.h"

namespace mmspk {

void LossConfig::Validate() const {
  if (!(scale > 0.0)) throw ConfigError("loss.scale must be > 0");
  if (!(tau > 0.0)) throw ConfigError("loss.tau must be > 0");
  if (!(mu > 0.0 && mu < 1.0))
    throw ConfigError("loss.mu must lie strictly inside (0, 1)");
  if (!(margin >= 0.0)) throw ConfigError("loss.margin must be >= 0");
  if (!(alpha >= 0.0)) throw ConfigError("loss.alpha must be >= 0");
  if (!(beta >= 0.0)) throw ConfigError("loss.beta must be >= 0");
  if (!(gamma >= 0.0)) throw ConfigError("loss.gamma must be >= 0");
}

void RequireUnitRows(const EmbeddingBatch &batch, const char *what,
                     double tol) {
  for (size_t i = 0; i < batch.size(); ++i) {
    const double norm = L2Norm(batch[i]);
    if (!(std::abs(norm - 1.0) <= tol))
      throw ContractError(std::string(what) + ": row " + std::to_string(i) +
                          " has norm " + std::to_string(norm));
  }
}

ClassifierWeights::ClassifierWeights(Matrix w) : w_(std::move(w)) {
  if (w_.rows() == 0 || w_.cols() == 0)
    throw ShapeError("ClassifierWeights: empty matrix");
}

ClassifierWeights ClassifierWeights::Random(size_t dim, size_t classes,
                                            Rng *rng) {
  ClassifierWeights w(GaussianMatrix(dim, classes, 1.0, rng));
  w.Renormalize();
  return w;
}

void ClassifierWeights::Renormalize() {
  for (size_t c = 0; c < w_.cols(); ++c) {
    double norm = 0.0;
    for (size_t r = 0; r < w_.rows(); ++r) norm += w_(r, c) * w_(r, c);
    norm = std::sqrt(norm);
    if (norm == 0.0)
      throw DegenerateInputError("ClassifierWeights: zero column " +
                                 std::to_string(c));
    for (size_t r = 0; r < w_.rows(); ++r) w_(r, c) /= norm;
  }
}

}  // namespace mmspk
