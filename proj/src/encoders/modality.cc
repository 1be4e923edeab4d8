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

#include "mmspk/encoders/modality.h"

#include "mmspk/numerics/errors.h"

namespace mmspk {

std::string_view ModalityName(Modality m) {
  switch (m) {
    case Modality::kSpeech:
      return "speech";
    case Modality::kFace:
      return "face";
    case Modality::kText:
      return "text";
  }
  return "unknown";
}

Modality ParseModality(std::string_view name) {
  if (name == "speech") return Modality::kSpeech;
  if (name == "face") return Modality::kFace;
  if (name == "text") return Modality::kText;
  throw DomainError("unknown modality '" + std::string(name) + "'");
}

Modality ModalityFromTag(uint8_t tag) {
  if (tag < 1 || tag > 3)
    throw FormatError("invalid modality tag " + std::to_string(tag));
  return static_cast<Modality>(tag);
}

}  // namespace mmspk
