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

#include "mmspk/encoders/text_encoder.h"

#include <cmath>
#include <string>

#include "mmspk/numerics/errors.h"

namespace mmspk {

TextEncoder::TextEncoder(Matrix table, Matrix query, Matrix key, Matrix value,
                         MlpEncoder head)
    : table_(std::move(table)),
      query_(std::move(query)),
      key_(std::move(key)),
      value_(std::move(value)),
      head_(std::move(head)) {
  const size_t w = table_.cols();
  if (table_.rows() == 0 || w == 0)
    throw ShapeError("TextEncoder: empty token table");
  if (query_.rows() != w || query_.cols() != 1)
    throw ShapeError("TextEncoder: query must be width x 1");
  if (key_.rows() != w || key_.cols() != w || value_.rows() != w ||
      value_.cols() != w)
    throw ShapeError("TextEncoder: key/value projections must be width x width");
  if (head_.input_dim() != w)
    throw ShapeError("TextEncoder: head input does not match width");
  head_.set_modality(Modality::kText);
}

TextEncoder TextEncoder::Random(size_t vocab_size, size_t width,
                                const std::vector<size_t> &head_hidden,
                                size_t output_dim, Rng *rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(width));
  // The table is indexed rather than multiplied, so unit-scale entries.
  Matrix table = UniformMatrix(vocab_size, width, 1.0, rng);
  Matrix query = UniformMatrix(width, 1, bound, rng);
  Matrix key = UniformMatrix(width, width, bound, rng);
  Matrix value = UniformMatrix(width, width, bound, rng);
  MlpEncoder head =
      MlpEncoder::Random(width, head_hidden, output_dim, Modality::kText, rng);
  return TextEncoder(std::move(table), std::move(query), std::move(key),
                     std::move(value), std::move(head));
}

Embedding TextEncoder::Encode(std::span<const TokenId> tokens,
                              TextCache *cache) const {
  if (tokens.empty()) throw DegenerateInputError("TextEncoder: empty prompt");
  for (TokenId t : tokens) {
    if (t < 0 || static_cast<size_t>(t) >= vocab_size())
      throw DomainError("TextEncoder: token id " + std::to_string(t) +
                        " outside vocabulary of " +
                        std::to_string(vocab_size()));
  }
  const size_t n = tokens.size();
  const double inv_sqrt_w = 1.0 / std::sqrt(static_cast<double>(width()));

  std::vector<Vector> keys(n), values(n);
  Vector scores(n);
  for (size_t t = 0; t < n; ++t) {
    auto x = table_.Row(static_cast<size_t>(tokens[t]));
    keys[t] = MatVec(key_, x);
    values[t] = MatVec(value_, x);
    scores[t] = Dot(query_.data(), keys[t]) * inv_sqrt_w;
  }
  const double lse = LogSumExp(scores);
  Vector weights(n);
  for (size_t t = 0; t < n; ++t) weights[t] = std::exp(scores[t] - lse);

  Vector pooled(width(), 0.0);
  for (size_t t = 0; t < n; ++t) Axpy(weights[t], values[t], pooled);

  MlpCache *head_cache = cache != nullptr ? &cache->head : nullptr;
  Embedding e = head_.Encode(pooled, head_cache);
  e.modality = Modality::kText;
  if (cache != nullptr) {
    cache->tokens.assign(tokens.begin(), tokens.end());
    cache->keys = std::move(keys);
    cache->values = std::move(values);
    cache->weights = std::move(weights);
    cache->pooled = std::move(pooled);
    cache->vocab_size = vocab_size();
    cache->width = width();
  }
  return e;
}

ParameterGradients TextEncoder::Backprop(
    const TextCache &cache, std::span<const double> grad_embedding) const {
  if (cache.vocab_size != vocab_size() || cache.width != width() ||
      cache.tokens.empty())
    throw StateError("TextEncoder: cache was produced by a different encoder");

  Vector grad_pooled;
  ParameterGradients head_grads =
      head_.Backprop(cache.head, grad_embedding, &grad_pooled);

  const size_t n = cache.tokens.size();
  const double inv_sqrt_w = 1.0 / std::sqrt(static_cast<double>(width()));
  Matrix d_table(vocab_size(), width());
  Matrix d_query(width(), 1);
  Matrix d_key(width(), width());
  Matrix d_value(width(), width());

  // Softmax backward: ds_t = w_t (dw_t - sum_u w_u dw_u).
  Vector d_weight(n);
  double mean = 0.0;
  for (size_t t = 0; t < n; ++t) {
    d_weight[t] = Dot(grad_pooled, cache.values[t]);
    mean += cache.weights[t] * d_weight[t];
  }
  for (size_t t = 0; t < n; ++t) {
    auto x = table_.Row(static_cast<size_t>(cache.tokens[t]));
    const double w = cache.weights[t];
    const double d_score = w * (d_weight[t] - mean) * inv_sqrt_w;

    // value path: v_t = V x_t, dv_t = w_t * grad_pooled
    AddOuter(w, grad_pooled, x, &d_value);
    // key path: score_t = q . k_t / sqrt(w)
    Axpy(d_score, cache.keys[t], d_query.data());
    AddOuter(d_score, query_.data(), x, &d_key);

    Vector dx = MatTVec(value_, grad_pooled);
    for (double &v : dx) v *= w;
    Vector dk_x = MatTVec(key_, query_.data());
    Axpy(d_score, dk_x, dx);
    Axpy(1.0, dx, d_table.Row(static_cast<size_t>(cache.tokens[t])));
  }

  ParameterGradients grads;
  grads.push_back(std::move(d_table));
  grads.push_back(std::move(d_query));
  grads.push_back(std::move(d_key));
  grads.push_back(std::move(d_value));
  for (Matrix &g : head_grads) grads.push_back(std::move(g));
  return grads;
}

std::vector<Matrix *> TextEncoder::Parameters() {
  std::vector<Matrix *> p{&table_, &query_, &key_, &value_};
  for (Matrix *m : head_.Parameters()) p.push_back(m);
  return p;
}

std::vector<const Matrix *> TextEncoder::Parameters() const {
  std::vector<const Matrix *> p{&table_, &query_, &key_, &value_};
  for (const Matrix *m : head_.Parameters()) p.push_back(m);
  return p;
}

ParameterGradients TextEncoder::ZeroGradients() const {
  ParameterGradients g;
  for (const Matrix *p : Parameters()) g.emplace_back(p->rows(), p->cols());
  return g;
}

}  // namespace mmspk
