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

#ifndef MMSPK_NUMERICS_RANDOM_H_
#define MMSPK_NUMERICS_RANDOM_H_

#include <cstdint>
#include <random>

#include "mmspk/numerics/matrix.h"

namespace mmspk {

using Rng = std::mt19937_64;

// Mixes a base seed with a stream tag (splitmix64 finalizer) so independent
// consumers of one run seed draw uncorrelated streams.
uint64_t DeriveSeed(uint64_t base, uint64_t stream);

inline Rng MakeRng(uint64_t base, uint64_t stream) {
  return Rng(DeriveSeed(base, stream));
}

Vector GaussianVector(size_t n, double stddev, Rng *rng);
Matrix GaussianMatrix(size_t rows, size_t cols, double stddev, Rng *rng);
Matrix UniformMatrix(size_t rows, size_t cols, double bound, Rng *rng);

}  // namespace mmspk

#endif  // MMSPK_NUMERICS_RANDOM_H_
