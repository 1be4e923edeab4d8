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

#ifndef MMSPK_NUMERICS_ADAM_H_
#define MMSPK_NUMERICS_ADAM_H_

#include <cstdint>

#include "mmspk/numerics/matrix.h"

namespace mmspk {

struct AdamOptions {
  double learning_rate = 0.0002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Optimizer state for one parameter block.
struct AdamState {
  Matrix first_moment;
  Matrix second_moment;
  int64_t step = 0;
  AdamOptions options;

  // Fresh state with zero accumulators shaped like `params`.
  static AdamState ForShape(const Matrix &params,
                            const AdamOptions &options = {});
};

struct AdamResult {
  Matrix params;
  AdamState state;
};

// One bias-corrected Adam update. Pure: returns the new parameters and
// state instead of mutating either input. Throws ShapeError when params,
// grads and accumulators disagree and NumericError on non-finite grads.
AdamResult AdamStep(const Matrix &params, const Matrix &grads,
                    const AdamState &state);

// In-place variant used by the training loops; same arithmetic as AdamStep.
void AdamStepInPlace(const Matrix &grads, Matrix *params, AdamState *state);

}  // namespace mmspk

#endif  // MMSPK_NUMERICS_ADAM_H_
