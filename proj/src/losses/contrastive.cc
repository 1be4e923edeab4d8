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

#include <cmath>
#include <string>

#include "mmspk/losses/losses.h"
#include "mmspk/numerics/errors.h"

namespace mmspk {

namespace {

// InfoNCE over anchor/candidate pairs where candidate i is anchor i's
// positive and its negatives are the candidates sharing group[i] whose label
// differs from labels[i].
ContrastiveResult GroupedInfoNce(const EmbeddingBatch &anchors,
                                 const EmbeddingBatch &candidates,
                                 std::span<const int> labels,
                                 std::span<const int> groups, double tau,
                                 const char *name) {
  const size_t n = anchors.size();
  if (candidates.size() != n || labels.size() != n || groups.size() != n)
    throw ShapeError(std::string(name) + ": batch sizes differ");
  if (n == 0) throw DegenerateInputError(std::string(name) + ": empty batch");
  if (!(tau > 0.0)) throw DomainError(std::string(name) + ": tau must be > 0");
  RequireUnitRows(anchors, name);
  RequireUnitRows(candidates, name);

  const size_t d = anchors[0].size();
  ContrastiveResult r;
  r.grad_anchors.assign(n, Vector(d, 0.0));
  r.grad_candidates.assign(n, Vector(d, 0.0));

  std::vector<size_t> members;
  Vector logits;
  for (size_t i = 0; i < n; ++i) {
    members.assign(1, i);
    for (size_t j = 0; j < n; ++j)
      if (groups[j] == groups[i] && labels[j] != labels[i])
        members.push_back(j);
    if (members.size() == 1)
      throw DegenerateInputError(std::string(name) + ": anchor " +
                                 std::to_string(i) +
                                 " has no negatives (single speaker label)");

    logits.resize(members.size());
    for (size_t k = 0; k < members.size(); ++k)
      logits[k] = Dot(anchors[i], candidates[members[k]]) / tau;
    const double lse = LogSumExp(logits);
    r.loss += lse - logits[0];

    for (size_t k = 0; k < members.size(); ++k) {
      const double p = std::exp(logits[k] - lse);
      const double dl = (p - (k == 0 ? 1.0 : 0.0)) / tau;
      Axpy(dl, candidates[members[k]], r.grad_anchors[i]);
      Axpy(dl, anchors[i], r.grad_candidates[members[k]]);
    }
  }
  return r;
}

}  // namespace

ContrastiveResult ContrastiveLoss(const EmbeddingBatch &anchors,
                                  const EmbeddingBatch &candidates,
                                  std::span<const int> labels, double tau) {
  std::vector<int> groups(anchors.size(), 0);
  return GroupedInfoNce(anchors, candidates, labels, groups, tau,
                        "ContrastiveLoss");
}

ContrastiveResult TextAlignmentLoss(const EmbeddingBatch &text,
                                    const EmbeddingBatch &candidates,
                                    std::span<const Modality> modalities,
                                    std::span<const int> labels, double tau) {
  if (modalities.size() != candidates.size())
    throw ShapeError("TextAlignmentLoss: one modality per candidate required");
  std::vector<int> groups(modalities.size());
  for (size_t i = 0; i < modalities.size(); ++i) {
    if (modalities[i] == Modality::kText)
      throw DomainError("TextAlignmentLoss: candidates must be speech or face");
    groups[i] = static_cast<int>(modalities[i]);
  }
  return GroupedInfoNce(text, candidates, labels, groups, tau,
                        "TextAlignmentLoss");
}

ContrastiveResult CosineAlignmentLoss(const EmbeddingBatch &anchors,
                                      const EmbeddingBatch &candidates) {
  const size_t n = anchors.size();
  if (candidates.size() != n)
    throw ShapeError("CosineAlignmentLoss: batch sizes differ");
  RequireUnitRows(anchors, "CosineAlignmentLoss");
  RequireUnitRows(candidates, "CosineAlignmentLoss");
  ContrastiveResult r;
  for (size_t i = 0; i < n; ++i) {
    r.loss += 1.0 - Dot(anchors[i], candidates[i]);
    Vector ga(candidates[i]), gc(anchors[i]);
    for (double &x : ga) x = -x;
    for (double &x : gc) x = -x;
    r.grad_anchors.push_back(std::move(ga));
    r.grad_candidates.push_back(std::move(gc));
  }
  return r;
}

}  // namespace mmspk
