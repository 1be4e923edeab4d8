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

#include "mmspk/synthdata/sampler.h"

#include <algorithm>

#include "mmspk/numerics/errors.h"
#include "mmspk/numerics/random.h"

namespace mmspk {

std::string_view PairingName(Pairing p) {
  switch (p) {
    case Pairing::kFaceSpeech:
      return "face-speech";
    case Pairing::kTextFace:
      return "text-face";
    case Pairing::kTextSpeech:
      return "text-speech";
  }
  return "unknown";
}

PairBatch SamplePairBatch(const Corpus &corpus, Pairing pairing, size_t n,
                          uint64_t seed, Split split) {
  if (n < 2) throw DegenerateInputError("SamplePairBatch: n must be >= 2");
  std::vector<int> pool = corpus.IdsOf(split);
  if (pool.size() < 2)
    throw DegenerateInputError(
        "SamplePairBatch: split needs at least two speakers for negatives");

  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(pairing)));
  std::vector<int> order = pool;
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<size_t> any_speaker(0, pool.size() - 1);

  PairBatch batch;
  batch.pairing = pairing;
  for (size_t i = 0; i < n; ++i)
    batch.speakers.push_back(i < order.size() ? order[i]
                                              : pool[any_speaker(rng)]);

  for (int spk : batch.speakers) {
    const size_t n_first =
        pairing == Pairing::kFaceSpeech ? corpus.face[spk].size()
                                        : corpus.prompts[spk].size();
    const size_t n_second =
        corpus.ObservationsOf(batch.SecondModality(), spk).size();
    batch.first.push_back(
        std::uniform_int_distribution<size_t>(0, n_first - 1)(rng));
    batch.second.push_back(
        std::uniform_int_distribution<size_t>(0, n_second - 1)(rng));
  }
  return batch;
}

}  // namespace mmspk
