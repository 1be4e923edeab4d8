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

#include "support/metric_oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmspk::testing {

std::vector<OraclePoint> MidpointSweep(const ScoreSet &s) {
  std::vector<double> sorted = s.scores;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> thresholds{-std::numeric_limits<double>::infinity()};
  for (size_t k = 0; k + 1 < sorted.size(); ++k)
    thresholds.push_back(0.5 * (sorted[k] + sorted[k + 1]));
  thresholds.push_back(std::numeric_limits<double>::infinity());

  double num_t = 0, num_n = 0;
  for (uint8_t t : s.targets) (t ? num_t : num_n) += 1;
  std::vector<OraclePoint> out;
  for (double theta : thresholds) {
    size_t fa = 0, fr = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s.targets[i] && s.scores[i] < theta) ++fr;
      if (!s.targets[i] && s.scores[i] >= theta) ++fa;
    }
    out.push_back({static_cast<double>(fa) / num_n,
                   static_cast<double>(fr) / num_t});
  }
  return out;
}

double OracleEer(const ScoreSet &s) {
  const std::vector<OraclePoint> p = MidpointSweep(s);
  for (size_t k = 0; k < p.size(); ++k) {
    const double d = p[k].far - p[k].frr;
    if (d > 0.0) continue;
    if (d == 0.0) return p[k].far;
    const double dprev = p[k - 1].far - p[k - 1].frr;
    const double w = dprev / (dprev - d);
    return p[k - 1].frr + w * (p[k].frr - p[k - 1].frr);
  }
  return std::nan("");
}

double OracleMinDcf(const ScoreSet &s, const DcfParams &q) {
  const double norm =
      std::min(q.c_miss * q.p_target, q.c_fa * (1.0 - q.p_target));
  double best = std::numeric_limits<double>::infinity();
  for (const OraclePoint &p : MidpointSweep(s))
    best = std::min(best, (q.c_miss * p.frr * q.p_target +
                           q.c_fa * p.far * (1.0 - q.p_target)) /
                              norm);
  return best;
}

namespace {

double Distance(const Vector &a, const Vector &b) {
  double ab = 0, aa = 0, bb = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return 1.0 - ab / std::sqrt(aa * bb);
}

}  // namespace

double OracleSilhouette(const EmbeddingBatch &x, const std::vector<int> &labels) {
  const size_t n = x.size();
  std::vector<int> clusters = labels;
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double a = 0.0;
    size_t same = 0;
    for (size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) {
        a += Distance(x[i], x[j]);
        ++same;
      }
    if (same == 0) continue;
    a /= static_cast<double>(same);
    double b = std::numeric_limits<double>::infinity();
    for (int c : clusters) {
      if (c == labels[i]) continue;
      double sum = 0.0;
      size_t count = 0;
      for (size_t j = 0; j < n; ++j)
        if (labels[j] == c) {
          sum += Distance(x[i], x[j]);
          ++count;
        }
      b = std::min(b, sum / static_cast<double>(count));
    }
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

ScoreSet RandomScoreSet(size_t n, bool ties, Rng *rng) {
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> grid(0, 20);
  std::bernoulli_distribution coin(0.5);
  ScoreSet s;
  for (size_t i = 0; i < n; ++i) {
    const bool target = i == 0 || (i != 1 && coin(*rng));
    // Grid scores are k / 10 for integer k so that ties are exact.
    const double x = ties ? (grid(*rng) + (target ? 8 : 0)) / 10.0
                          : gauss(*rng) + (target ? 0.8 : 0.0);
    s.scores.push_back(x);
    s.targets.push_back(target ? 1 : 0);
  }
  return s;
}

}  // namespace mmspk::testing
