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

#include "mmspk/numerics/adam.h"

#include <cmath>

#include "mmspk/numerics/errors.h"

namespace mmspk {

AdamState AdamState::ForShape(const Matrix &params,
                              const AdamOptions &options) {
  AdamState s;
  s.first_moment = Matrix(params.rows(), params.cols());
  s.second_moment = Matrix(params.rows(), params.cols());
  s.options = options;
  return s;
}

void AdamStepInPlace(const Matrix &grads, Matrix *params, AdamState *state) {
  if (!params->SameShape(grads) || !params->SameShape(state->first_moment) ||
      !params->SameShape(state->second_moment))
    throw ShapeError("AdamStep: parameter, gradient and moment shapes differ");
  if (!grads.AllFinite()) throw NumericError("AdamStep: non-finite gradient");

  const AdamOptions &o = state->options;
  state->step += 1;
  const double t = static_cast<double>(state->step);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);

  auto p = params->data();
  auto g = grads.data();
  auto m = state->first_moment.data();
  auto v = state->second_moment.data();
  for (size_t i = 0; i < p.size(); ++i) {
    m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
    v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
    double m_hat = m[i] / bias1;
    double v_hat = v[i] / bias2;
    p[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
}

AdamResult AdamStep(const Matrix &params, const Matrix &grads,
                    const AdamState &state) {
  AdamResult r{params, state};
  AdamStepInPlace(grads, &r.params, &r.state);
  return r;
}

}  // namespace mmspk
