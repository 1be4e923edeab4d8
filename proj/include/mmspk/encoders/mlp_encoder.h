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

#ifndef MMSPK_ENCODERS_MLP_ENCODER_H_
#define MMSPK_ENCODERS_MLP_ENCODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mmspk/encoders/modality.h"
#include "mmspk/numerics/matrix.h"
#include "mmspk/numerics/random.h"

namespace mmspk {

enum class Activation : uint8_t { kIdentity = 0, kTanh = 1 };

// y = act(W x + b). `bias` is an out x 1 column so every parameter block is
// a Matrix and can share one optimizer code path.
struct DenseLayer {
  Matrix weight;
  Matrix bias;
  Activation activation = Activation::kTanh;

  size_t input_dim() const { return weight.cols(); }
  size_t output_dim() const { return weight.rows(); }
  friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

// Gradient blocks in the same order as the owning encoder's Parameters().
using ParameterGradients = std::vector<Matrix>;

struct MlpCache {
  // inputs[l] is the input to layer l; activations[l] its output.
  std::vector<Vector> inputs;
  std::vector<Vector> activations;
  Vector normalized;
  double norm = 0.0;
  // (in, out) of each layer at forward time, checked by Backprop.
  std::vector<std::pair<size_t, size_t>> shapes;
};

// Fully connected encoder whose output is projected onto the unit sphere.
class MlpEncoder {
 public:
  MlpEncoder() = default;
  // Throws ShapeError if consecutive layers do not compose.
  MlpEncoder(std::vector<DenseLayer> layers, Modality modality);

  // Hidden layers use tanh, the output layer is linear. Weights and biases
  // are drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static MlpEncoder Random(size_t input_dim, const std::vector<size_t> &hidden,
                           size_t output_dim, Modality modality, Rng *rng);

  size_t input_dim() const;
  size_t output_dim() const;
  size_t num_layers() const { return layers_.size(); }
  Modality modality() const { return modality_; }
  void set_modality(Modality m) { modality_ = m; }
  const std::vector<DenseLayer> &layers() const { return layers_; }

  // Appends a linear d x d layer initialised to the identity, so the result
  // computes exactly the same embedding as *this until it is trained.
  MlpEncoder WithIdentityHead() const;

  Embedding Encode(std::span<const double> features,
                   MlpCache *cache = nullptr) const;

  // Chain rule from dL/d(embedding) back to every parameter block.
  // `grad_input`, when non-null, receives dL/d(features).
  ParameterGradients Backprop(const MlpCache &cache,
                              std::span<const double> grad_embedding,
                              Vector *grad_input = nullptr) const;

  std::vector<Matrix *> Parameters();
  std::vector<const Matrix *> Parameters() const;
  ParameterGradients ZeroGradients() const;

  friend bool operator==(const MlpEncoder &, const MlpEncoder &) = default;

 private:
  std::vector<DenseLayer> layers_;
  Modality modality_ = Modality::kSpeech;
};

// Adds `src` into `dst` block by block.
void AccumulateGradients(const ParameterGradients &src,
                         ParameterGradients *dst, double scale = 1.0);

}  // namespace mmspk

#endif  // MMSPK_ENCODERS_MLP_ENCODER_H_
