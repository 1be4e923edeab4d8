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

#ifndef MMSPK_EVAL_METRICS_H_
#define MMSPK_EVAL_METRICS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mmspk/losses/loss_config.h"

namespace mmspk {

// Parallel lists of trial scores and target flags.
struct ScoreSet {
  std::vector<double> scores;
  std::vector<uint8_t> targets;  // 1 target, 0 nontarget

  size_t size() const { return scores.size(); }
  size_t num_targets() const;
  friend bool operator==(const ScoreSet &, const ScoreSet &) = default;
};

// Throws ShapeError on length mismatch, NumericError on a non-finite score
// and DegenerateInputError unless both classes are present.
void ValidateScores(const ScoreSet &s);

// One operating point of the threshold sweep. A trial is accepted when its
// score is >= threshold; the last point has threshold +inf.
struct SweepPoint {
  double threshold = 0.0;
  double far = 0.0;  // nontargets accepted / nontargets
  double frr = 0.0;  // targets rejected / targets
};

// Every distinct score in ascending order, then +inf.
std::vector<SweepPoint> ThresholdSweep(const ScoreSet &s);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Linear interpolation between the two sweep points where FAR - FRR changes
// sign; a point with FAR == FRR is returned as is.
EerResult ComputeEer(const ScoreSet &s);

struct DcfParams {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;
};

struct MinDcfResult {
  double min_dcf = 0.0;  // normalised by min(c_miss p, c_fa (1 - p))
  double threshold = 0.0;
};

// Throws DomainError unless p_target lies in (0, 1) and both costs are > 0.
MinDcfResult ComputeMinDcf(const ScoreSet &s, const DcfParams &params = {});

// (FAR, FRR) for each sweep point, in ascending threshold order.
std::vector<SweepPoint> DetPoints(const ScoreSet &s);

// Mean silhouette with distance 1 - cosine. Singleton clusters score 0.
// Throws DegenerateInputError with fewer than two clusters.
double SilhouetteScore(const EmbeddingBatch &embeddings,
                       std::span<const int> labels);

}  // namespace mmspk

#endif  // MMSPK_EVAL_METRICS_H_
