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

#ifndef MMSPK_ENCODERS_TEXT_ENCODER_H_
#define MMSPK_ENCODERS_TEXT_ENCODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mmspk/encoders/mlp_encoder.h"

namespace mmspk {

using TokenId = int32_t;

struct TextCache {
  std::vector<TokenId> tokens;
  std::vector<Vector> keys;
  std::vector<Vector> values;
  // Softmax pooling weights over the tokens; non-negative, sum to 1.
  Vector weights;
  Vector pooled;
  MlpCache head;
  size_t vocab_size = 0;
  size_t width = 0;
};

// Prompt encoder: token embedding table, single-query attention pooling,
// and an MLP head that maps the pooled vector onto the unit sphere.
//
//   x_t = table[token_t]
//   k_t = K x_t,  v_t = V x_t
//   w   = softmax_t(q . k_t / sqrt(width))
//   e   = head(sum_t w_t v_t)
class TextEncoder {
 public:
  TextEncoder() = default;
  // Throws ShapeError unless table is vocab x width, query width x 1, key
  // and value width x width, and head takes `width` inputs.
  TextEncoder(Matrix table, Matrix query, Matrix key, Matrix value,
              MlpEncoder head);

  static TextEncoder Random(size_t vocab_size, size_t width,
                            const std::vector<size_t> &head_hidden,
                            size_t output_dim, Rng *rng);

  size_t vocab_size() const { return table_.rows(); }
  size_t width() const { return table_.cols(); }
  size_t output_dim() const { return head_.output_dim(); }

  const Matrix &table() const { return table_; }
  const Matrix &query() const { return query_; }
  const Matrix &key() const { return key_; }
  const Matrix &value() const { return value_; }
  const MlpEncoder &head() const { return head_; }

  // Throws DegenerateInputError on an empty sequence and DomainError on an
  // out-of-vocabulary id.
  Embedding Encode(std::span<const TokenId> tokens,
                   TextCache *cache = nullptr) const;

  // Gradients ordered as Parameters(): table, query, key, value, head...
  ParameterGradients Backprop(const TextCache &cache,
                              std::span<const double> grad_embedding) const;

  std::vector<Matrix *> Parameters();
  std::vector<const Matrix *> Parameters() const;
  ParameterGradients ZeroGradients() const;

  friend bool operator==(const TextEncoder &, const TextEncoder &) = default;

 private:
  Matrix table_;
  Matrix query_;
  Matrix key_;
  Matrix value_;
  MlpEncoder head_;
};

}  // namespace mmspk

#endif  // MMSPK_ENCODERS_TEXT_ENCODER_H_
