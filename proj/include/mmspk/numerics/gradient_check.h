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

#ifndef MMSPK_NUMERICS_GRADIENT_CHECK_H_
#define MMSPK_NUMERICS_GRADIENT_CHECK_H_

#include <functional>
#include <span>

namespace mmspk {

using ScalarFunction = std::function<double(std::span<const double>)>;

// Compares `analytic` against central differences of `f` at `point`:
//   max_k |analytic_k - fd_k| / max(1, |fd_k|)
// Throws NumericError if f is non-finite at any probe.
double CheckGradient(const ScalarFunction &f, std::span<const double> analytic,
                     std::span<const double> point, double h = 1e-5);

}  // namespace mmspk

#endif  // MMSPK_NUMERICS_GRADIENT_CHECK_H_
