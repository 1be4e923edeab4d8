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

#ifndef MMSPK_SYNTHDATA_SAMPLER_H_
#define MMSPK_SYNTHDATA_SAMPLER_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "mmspk/synthdata/corpus.h"

namespace mmspk {

enum class Pairing { kFaceSpeech, kTextFace, kTextSpeech };

std::string_view PairingName(Pairing p);

// Item i pairs an element of the first side with one of the second side,
// both owned by speakers[i]:
//   kFaceSpeech: first = face observation index,  second = speech index
//   kTextFace:   first = prompt index,            second = face index
//   kTextSpeech: first = prompt index,            second = speech index
struct PairBatch {
  Pairing pairing = Pairing::kFaceSpeech;
  std::vector<int> speakers;
  std::vector<size_t> first;
  std::vector<size_t> second;

  size_t size() const { return speakers.size(); }
  Modality SecondModality() const {
    return pairing == Pairing::kTextFace ? Modality::kFace : Modality::kSpeech;
  }
  friend bool operator==(const PairBatch &, const PairBatch &) = default;
};

// Draws n pairs from one split. Speakers are taken without replacement while
// possible, so a batch holds min(n, #speakers) distinct labels. Throws
// DegenerateInputError when n < 2 or the split has fewer than 2 speakers.
PairBatch SamplePairBatch(const Corpus &corpus, Pairing pairing, size_t n,
                          uint64_t seed, Split split = Split::kTrain);

}  // namespace mmspk

#endif  // MMSPK_SYNTHDATA_SAMPLER_H_
