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

#include "mmspk/numerics/random.h"

namespace mmspk {

uint64_t DeriveSeed(uint64_t base, uint64_t stream) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector GaussianVector(size_t n, double stddev, Rng *rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (double &x : v) x = stddev * dist(*rng);
  return v;
}

Matrix GaussianMatrix(size_t rows, size_t cols, double stddev, Rng *rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (double &x : m.data()) x = stddev * dist(*rng);
  return m;
}

Matrix UniformMatrix(size_t rows, size_t cols, double bound, Rng *rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (double &x : m.data()) x = dist(*rng);
  return m;
}

}  // namespace mmspk
