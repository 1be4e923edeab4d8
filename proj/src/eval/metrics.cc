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

#include "mmspk/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mmspk/numerics/errors.h"

namespace mmspk {

size_t ScoreSet::num_targets() const {
  return static_cast<size_t>(std::count(targets.begin(), targets.end(), 1));
}

void ValidateScores(const ScoreSet &s) {
  if (s.scores.size() != s.targets.size())
    throw ShapeError("ScoreSet: scores and targets differ in length");
  for (double x : s.scores)
    if (!std::isfinite(x)) throw NumericError("ScoreSet: non-finite score");
  const size_t t = s.num_targets();
  if (t == 0 || t == s.size())
    throw DegenerateInputError(
        "ScoreSet: need at least one target and one nontarget trial");
}

std::vector<SweepPoint> ThresholdSweep(const ScoreSet &s) {
  ValidateScores(s);
  std::vector<size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return s.scores[a] < s.scores[b]; });
  const size_t num_t = s.num_targets();
  const size_t num_n = s.size() - num_t;
  const double t = static_cast<double>(num_t);
  const double n = static_cast<double>(num_n);

  std::vector<SweepPoint> points;
  size_t targets_below = 0, nontargets_below = 0;
  for (size_t k = 0; k < order.size();) {
    const double theta = s.scores[order[k]];
    points.push_back({theta, static_cast<double>(num_n - nontargets_below) / n,
                      static_cast<double>(targets_below) / t});
    for (; k < order.size() && s.scores[order[k]] == theta; ++k)
      (s.targets[order[k]] ? targets_below : nontargets_below) += 1;
  }
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return points;
}

EerResult ComputeEer(const ScoreSet &s) {
  const std::vector<SweepPoint> p = ThresholdSweep(s);
  size_t k = 0;
  while (p[k].far - p[k].frr > 0.0) ++k;
  const double dk = p[k].far - p[k].frr;
  if (dk == 0.0) return {p[k].far, p[k].threshold};
  const double dprev = p[k - 1].far - p[k - 1].frr;
  const double w = dprev / (dprev - dk);
  EerResult r;
  r.eer = p[k - 1].frr + w * (p[k].frr - p[k - 1].frr);
  r.threshold = std::isinf(p[k].threshold)
                    ? p[k - 1].threshold
                    : p[k - 1].threshold +
                          w * (p[k].threshold - p[k - 1].threshold);
  return r;
}

MinDcfResult ComputeMinDcf(const ScoreSet &s, const DcfParams &params) {
  if (!(params.p_target > 0.0 && params.p_target < 1.0))
    throw DomainError("minDCF: p_target must lie in (0, 1)");
  if (!(params.c_miss > 0.0 && params.c_fa > 0.0))
    throw DomainError("minDCF: costs must be > 0");
  const double norm = std::min(params.c_miss * params.p_target,
                               params.c_fa * (1.0 - params.p_target));
  MinDcfResult best{std::numeric_limits<double>::infinity(), 0.0};
  for (const SweepPoint &p : ThresholdSweep(s)) {
    const double dcf = (params.c_miss * p.frr * params.p_target +
                        params.c_fa * p.far * (1.0 - params.p_target)) /
                       norm;
    if (dcf < best.min_dcf) best = {dcf, p.threshold};
  }
  return best;
}

std::vector<SweepPoint> DetPoints(const ScoreSet &s) { return ThresholdSweep(s); }

double SilhouetteScore(const EmbeddingBatch &embeddings,
                       std::span<const int> labels) {
  const size_t n = embeddings.size();
  if (labels.size() != n)
    throw ShapeError("SilhouetteScore: one label per embedding required");
  std::map<int, size_t> cluster_of;
  for (int l : labels) cluster_of.emplace(l, cluster_of.size());
  if (cluster_of.size() < 2)
    throw DegenerateInputError("SilhouetteScore: need at least two clusters");
  const size_t c = cluster_of.size();
  std::vector<size_t> cluster(n), sizes(c, 0);
  for (size_t i = 0; i < n; ++i) {
    cluster[i] = cluster_of[labels[i]];
    sizes[cluster[i]] += 1;
  }

  double total = 0.0;
  std::vector<double> sum(c);
  for (size_t i = 0; i < n; ++i) {
    if (sizes[cluster[i]] == 1) continue;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (size_t j = 0; j < n; ++j)
      if (j != i)
        sum[cluster[j]] += 1.0 - CosineSimilarity(embeddings[i], embeddings[j]);
    const double a =
        sum[cluster[i]] / static_cast<double>(sizes[cluster[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < c; ++k)
      if (k != cluster[i]) b = std::min(b, sum[k] / static_cast<double>(sizes[k]));
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

}  // namespace mmspk
