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

#include "mmspk/encoders/mlp_encoder.h"

#include <cmath>
#include <string>

#include "mmspk/numerics/errors.h"

namespace mmspk {

MlpEncoder::MlpEncoder(std::vector<DenseLayer> layers, Modality modality)
    : layers_(std::move(layers)), modality_(modality) {
  if (layers_.empty()) throw ShapeError("MlpEncoder: no layers");
  for (size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer &layer = layers_[l];
    if (layer.bias.rows() != layer.output_dim() || layer.bias.cols() != 1)
      throw ShapeError("MlpEncoder: bias of layer " + std::to_string(l) +
                       " does not match its weight");
    if (l > 0 && layer.input_dim() != layers_[l - 1].output_dim())
      throw ShapeError("MlpEncoder: layer " + std::to_string(l) +
                       " does not compose with its predecessor");
  }
}

MlpEncoder MlpEncoder::Random(size_t input_dim,
                              const std::vector<size_t> &hidden,
                              size_t output_dim, Modality modality, Rng *rng) {
  std::vector<size_t> dims{input_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);
  std::vector<DenseLayer> layers;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    DenseLayer layer;
    layer.weight = UniformMatrix(dims[l + 1], dims[l], bound, rng);
    layer.bias = UniformMatrix(dims[l + 1], 1, bound, rng);
    layer.activation =
        l + 2 == dims.size() ? Activation::kIdentity : Activation::kTanh;
    layers.push_back(std::move(layer));
  }
  return MlpEncoder(std::move(layers), modality);
}

size_t MlpEncoder::input_dim() const {
  return layers_.empty() ? 0 : layers_.front().input_dim();
}

size_t MlpEncoder::output_dim() const {
  return layers_.empty() ? 0 : layers_.back().output_dim();
}

MlpEncoder MlpEncoder::WithIdentityHead() const {
  std::vector<DenseLayer> layers = layers_;
  const size_t d = output_dim();
  layers.push_back(
      DenseLayer{Matrix::Identity(d), Matrix(d, 1), Activation::kIdentity});
  return MlpEncoder(std::move(layers), modality_);
}

Embedding MlpEncoder::Encode(std::span<const double> features,
                             MlpCache *cache) const {
  if (layers_.empty()) throw StateError("MlpEncoder: encoder has no layers");
  if (features.size() != input_dim())
    throw ShapeError("MlpEncoder: expected " + std::to_string(input_dim()) +
                     " features, got " + std::to_string(features.size()));
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->activations.clear();
    cache->shapes.clear();
  }
  Vector x(features.begin(), features.end());
  for (const DenseLayer &layer : layers_) {
    Vector z = MatVec(layer.weight, x);
    for (size_t k = 0; k < z.size(); ++k) {
      z[k] += layer.bias(k, 0);
      if (layer.activation == Activation::kTanh) z[k] = std::tanh(z[k]);
    }
    if (cache != nullptr) {
      cache->inputs.push_back(std::move(x));
      cache->activations.push_back(z);
      cache->shapes.emplace_back(layer.input_dim(), layer.output_dim());
    }
    x = std::move(z);
  }
  double norm = L2Norm(x);
  Embedding e{L2Normalize(x), modality_};
  if (cache != nullptr) {
    cache->normalized = e.values;
    cache->norm = norm;
  }
  return e;
}

ParameterGradients MlpEncoder::Backprop(const MlpCache &cache,
                                        std::span<const double> grad_embedding,
                                        Vector *grad_input) const {
  if (cache.shapes.size() != layers_.size())
    throw StateError("MlpEncoder: cache was produced by a different encoder");
  for (size_t l = 0; l < layers_.size(); ++l) {
    if (cache.shapes[l] != std::make_pair(layers_[l].input_dim(),
                                          layers_[l].output_dim()))
      throw StateError("MlpEncoder: cache was produced by a different encoder");
  }
  if (grad_embedding.size() != output_dim())
    throw ShapeError("MlpEncoder: upstream gradient has wrong length");

  ParameterGradients grads(2 * layers_.size());
  Vector g = BackpropNormalize(cache.normalized, cache.norm, grad_embedding);
  for (size_t l = layers_.size(); l-- > 0;) {
    const DenseLayer &layer = layers_[l];
    if (layer.activation == Activation::kTanh) {
      const Vector &a = cache.activations[l];
      for (size_t k = 0; k < g.size(); ++k) g[k] *= 1.0 - a[k] * a[k];
    }
    Matrix dw(layer.output_dim(), layer.input_dim());
    AddOuter(1.0, g, cache.inputs[l], &dw);
    grads[2 * l] = std::move(dw);
    grads[2 * l + 1] = Matrix(layer.output_dim(), 1, g);
    g = MatTVec(layer.weight, g);
  }
  if (grad_input != nullptr) *grad_input = std::move(g);
  return grads;
}

std::vector<Matrix *> MlpEncoder::Parameters() {
  std::vector<Matrix *> p;
  for (DenseLayer &layer : layers_) {
    p.push_back(&layer.weight);
    p.push_back(&layer.bias);
  }
  return p;
}

std::vector<const Matrix *> MlpEncoder::Parameters() const {
  std::vector<const Matrix *> p;
  for (const DenseLayer &layer : layers_) {
    p.push_back(&layer.weight);
    p.push_back(&layer.bias);
  }
  return p;
}

ParameterGradients MlpEncoder::ZeroGradients() const {
  ParameterGradients g;
  for (const Matrix *p : Parameters()) g.emplace_back(p->rows(), p->cols());
  return g;
}

void AccumulateGradients(const ParameterGradients &src,
                         ParameterGradients *dst, double scale) {
  if (src.size() != dst->size())
    throw ShapeError("AccumulateGradients: block count mismatch");
  for (size_t i = 0; i < src.size(); ++i) {
    if (!src[i].SameShape((*dst)[i]))
      throw ShapeError("AccumulateGradients: block shape mismatch");
    Axpy(scale, src[i].data(), (*dst)[i].data());
  }
}

}  // namespace mmspk
