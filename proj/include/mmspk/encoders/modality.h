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

#ifndef MMSPK_ENCODERS_MODALITY_H_
#define MMSPK_ENCODERS_MODALITY_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "mmspk/numerics/matrix.h"

namespace mmspk {

// Numeric values are the on-disk tags and match the usual o = 1, 2, 3
// modality indexing.
enum class Modality : uint8_t { kSpeech = 1, kFace = 2, kText = 3 };

std::string_view ModalityName(Modality m);
// Accepts "speech", "face", "text". Throws DomainError otherwise.
Modality ParseModality(std::string_view name);
// Accepts 1, 2, 3. Throws FormatError otherwise.
Modality ModalityFromTag(uint8_t tag);

// A speaker embedding: unit-norm vector plus the modality it came from.
struct Embedding {
  Vector values;
  Modality modality = Modality::kSpeech;

  size_t dim() const { return values.size(); }
  friend bool operator==(const Embedding &, const Embedding &) = default;
};

}  // namespace mmspk

#endif  // MMSPK_ENCODERS_MODALITY_H_
