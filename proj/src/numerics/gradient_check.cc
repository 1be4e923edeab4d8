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

#include "mmspk/numerics/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmspk/numerics/errors.h"

namespace mmspk {

double CheckGradient(const ScalarFunction &f, std::span<const double> analytic,
                     std::span<const double> point, double h) {
  if (analytic.size() != point.size())
    throw ShapeError("CheckGradient: gradient and point lengths differ");
  if (!(h > 0.0)) throw DomainError("CheckGradient: step must be positive");

  std::vector<double> x(point.begin(), point.end());
  double worst = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double plus = f(x);
    x[k] = saved - h;
    const double minus = f(x);
    x[k] = saved;
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw NumericError("CheckGradient: non-finite function value");
    const double fd = (plus - minus) / (2.0 * h);
    worst = std::max(worst,
                     std::abs(analytic[k] - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace mmspk
