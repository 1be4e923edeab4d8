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

#ifndef MMSPK_ENCODERS_TEACHER_H_
#define MMSPK_ENCODERS_TEACHER_H_

#include <span>

#include "mmspk/encoders/mlp_encoder.h"

namespace mmspk {

// A frozen encoder. Holds its network by value and only hands out const
// access, so nothing downstream can update the parameters.
class TeacherEncoder {
 public:
  TeacherEncoder() = default;
  explicit TeacherEncoder(MlpEncoder encoder) : encoder_(std::move(encoder)) {}

  const MlpEncoder &encoder() const { return encoder_; }
  Modality modality() const { return encoder_.modality(); }
  size_t output_dim() const { return encoder_.output_dim(); }

  Embedding Encode(std::span<const double> features) const {
    return encoder_.Encode(features);
  }

 private:
  MlpEncoder encoder_;
};

}  // namespace mmspk

#endif  // MMSPK_ENCODERS_TEACHER_H_
