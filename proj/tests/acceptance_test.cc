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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmspk/cli/commands.h"
#include "mmspk/encoders/checkpoint.h"
#include "mmspk/eval/evaluate.h"
#include "mmspk/losses/losses.h"
#include "mmspk/pipeline/bundle.h"
#include "mmspk/pipeline/training.h"
#include "mmspk/synthdata/corpus.h"
#include "support/gradient_suite.h"
#include "support/metric_oracles.h"

namespace fs = std::filesystem;
using namespace mmspk;
using namespace mmspk::testing;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string &name, const Outcome &o) {
  std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id,
              name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string Fmt(const char *format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

EmbeddingBatch RandomUnitBatch(size_t n, size_t d, Rng *rng) {
  std::normal_distribution<double> g;
  EmbeddingBatch out(n, Vector(d));
  for (Vector &v : out) {
    for (double &x : v) x = g(*rng);
    v = L2Normalize(v);
  }
  return out;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome GradientSuite() {
  const auto t0 = Clock::now();
  const std::vector<GradientAudit> audits = RunGradientSuite({});
  const double secs = Seconds(t0);
  Outcome o{secs < 60.0, ""};
  for (const GradientAudit &a : audits) {
    o.pass = o.pass && a.trials >= 50 && a.worst < 1e-4;
    o.detail += Fmt("%s %d/%.1e, ", a.name.c_str(), a.trials, a.worst);
  }
  o.detail += Fmt("%.1fs", secs);
  return o;
}

Outcome ClosedForms() {
  Rng rng(2);
  bool kd_zero = true;
  for (int t = 0; t < 20; ++t) {
    EmbeddingBatch f = RandomUnitBatch(6, 8, &rng);
    Matrix s(6, 6);
    for (size_t i = 0; i < 6; ++i)
      for (size_t j = 0; j < 6; ++j) s(i, j) = Dot(f[i], f[j]);
    kd_zero = kd_zero && KdLoss(SimilarityMatrix{s}, f, f, 0.1).loss == 0.0;
  }

  double worst_nlogn = 0.0;
  for (size_t n : {2, 4, 6, 16}) {
    EmbeddingBatch same(n, RandomUnitBatch(1, 8, &rng)[0]);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
    const double loss = ContrastiveLoss(same, same, labels, 0.1).loss;
    worst_nlogn = std::max(worst_nlogn,
                           std::abs(loss - static_cast<double>(n) * std::log(n)));
  }

  LossConfig cfg;
  bool ce_zero = true;
  for (int t = 0; t < 20; ++t) {
    EmbeddingBatch sp = RandomUnitBatch(6, 8, &rng), fa = RandomUnitBatch(6, 8, &rng);
    std::vector<int> labels(6, 0);
    ce_zero = ce_zero && SharedWeightCeLoss(sp, labels, fa, labels,
                                            ClassifierWeights::Random(8, 1, &rng), cfg)
                                 .loss == 0.0;
  }

  Matrix a(2, 2), b(2, 2);
  a(0, 1) = 1.0;
  b(0, 1) = 0.5;
  const double fused =
      FuseSimilarity(SimilarityMatrix{a}, SimilarityMatrix{b}, 0.8).values(0, 1);
  const double fuse_err = std::abs(fused - 0.9);

  return {kd_zero && worst_nlogn < 1e-9 && ce_zero && fuse_err < 1e-12,
          Fmt("kd zero %s, n log n err %.1e, c=1 zero %s, fuse err %.1e",
              kd_zero ? "yes" : "no", worst_nlogn, ce_zero ? "yes" : "no",
              fuse_err)};
}

Outcome MetricOracles() {
  const auto t0 = Clock::now();
  Rng rng(3);
  std::uniform_int_distribution<size_t> size(2, 1000);
  int eer_bad = 0, dcf_bad = 0;
  for (int k = 0; k < 200; ++k) {
    const ScoreSet s = RandomScoreSet(size(rng), k % 2 == 1, &rng);
    eer_bad += ComputeEer(s).eer != OracleEer(s);
    dcf_bad += ComputeMinDcf(s).min_dcf != OracleMinDcf(s, {});
  }
  double sil_worst = 0.0;
  std::uniform_int_distribution<size_t> points(2, 200);
  std::uniform_int_distribution<int> cluster(0, 1);
  for (int k = 0; k < 100; ++k) {
    const size_t n = points(rng);
    EmbeddingBatch x = RandomUnitBatch(n, 16, &rng);
    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) labels[i] = i < 2 ? static_cast<int>(i) : cluster(rng);
    sil_worst = std::max(sil_worst, std::abs(SilhouetteScore(x, labels) -
                                             OracleSilhouette(x, labels)));
  }
  const double secs = Seconds(t0);
  return {eer_bad == 0 && dcf_bad == 0 && sil_worst < 1e-12 && secs < 60.0,
          Fmt("eer mismatches %d/200, min_dcf mismatches %d/200, silhouette err "
              "%.1e, %.1fs",
              eer_bad, dcf_bad, sil_worst, secs)};
}

struct SeedRun {
  Corpus corpus;
  ModelBundle bundle;  // stages 0 and 1, full loss
  double untrained_eer = 0.0;
};

SeedRun TrainSeed(uint64_t seed) {
  CorpusConfig cc;
  cc.seed = seed;
  TrainConfig tc;
  tc.seed = seed;
  SeedRun r{GenerateCorpus(cc), {}, 0.0};
  RunStage(0, r.corpus, tc, &r.bundle, nullptr);
  r.untrained_eer = CrossModalEer(
      r.corpus, *r.bundle.speech,
      InitialFaceStudent(TeacherEncoder(*r.bundle.face_teacher)), TrialConfig{});
  RunStage(1, r.corpus, tc, &r.bundle, nullptr);
  return r;
}

double TrainedEer(const SeedRun &r) {
  return CrossModalEer(r.corpus, *r.bundle.speech, *r.bundle.face, TrialConfig{});
}

Outcome StageOne(const SeedRun &run, double secs) {
  const double eer = TrainedEer(run);
  return {eer <= 0.5 * run.untrained_eer && secs < 120.0,
          Fmt("EER %.4f vs untrained %.4f (ratio %.3f, need <= 0.5), %.1fs", eer,
              run.untrained_eer, eer / run.untrained_eer, secs)};
}

Outcome AblationOrdering(const SeedRun &seed_one, double seed_one_secs) {
  const auto t0 = Clock::now();
  std::vector<double> full, no_kd, no_ce;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const SeedRun r = seed == 1 ? seed_one : TrainSeed(seed);
    full.push_back(TrainedEer(r));
    for (Ablation a : {Ablation::kNoKd, Ablation::kNoCe}) {
      TrainConfig tc;
      tc.seed = seed;
      tc.ablation = a;
      ModelBundle b = r.bundle;
      RunStage(1, r.corpus, tc, &b, nullptr);
      (a == Ablation::kNoKd ? no_kd : no_ce)
          .push_back(CrossModalEer(r.corpus, *b.speech, *b.face, TrialConfig{}));
    }
  }
  const double secs = Seconds(t0) + seed_one_secs;
  const double mf = Median(full), mk = Median(no_kd), mc = Median(no_ce);
  return {mf <= mk && mf <= mc && secs < 900.0,
          Fmt("median EER full %.4f, no-kd %.4f, no-ce %.4f, %.1fs", mf, mk, mc,
              secs)};
}

Outcome StageTwo(const SeedRun &run) {
  const auto t0 = Clock::now();
  TrainConfig tc;
  const TextEncoder init = InitialTextEncoder(tc);
  const double top1_before = PromptRetrievalAccuracy(run.corpus, *run.bundle.speech, init);
  const double val_before =
      TextValidationLoss(run.corpus, *run.bundle.speech, *run.bundle.face, init, tc.loss);
  ModelBundle b = run.bundle;
  RunStage(2, run.corpus, tc, &b, nullptr);
  const double top1 = PromptRetrievalAccuracy(run.corpus, *b.speech, *b.text);
  const double val = TextValidationLoss(run.corpus, *b.speech, *b.face, *b.text, tc.loss);
  const double secs = Seconds(t0);
  return {top1 >= 2.0 * top1_before && val <= 0.5 * val_before && secs < 120.0,
          Fmt("top1 %.4f -> %.4f (x%.2f, need >= 2), validation loss %.2f -> %.2f "
              "(drop %.1f%%, need >= 50%%), %.1fs",
              top1_before, top1, top1 / top1_before, val_before, val,
              100.0 * (1.0 - val / val_before), secs)};
}

Outcome Determinism() {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "mmspk_acceptance";
  fs::remove_all(root);
  std::vector<std::string> reports;
  std::string failure;
  for (const char *run : {"a", "b"}) {
    const fs::path dir = root / run;
    std::ostringstream out, err;
    const std::vector<std::vector<std::string>> steps{
        {"gen-data", "--out", (dir / "data").string()},
        {"train", "--stage", "all", "--corpus", (dir / "data").string(),
         "--checkpoint", (dir / "bundle").string()},
        {"eval", "--bundle", (dir / "bundle").string(), "--corpus",
         (dir / "data").string(), "--report", (dir / "report.json").string()}};
    for (const auto &args : steps)
      if (int code = RunCli(args, {}, out, err); code != 0 && failure.empty())
        failure = args[0] + " exited " + std::to_string(code) + ": " + err.str();
    if (failure.empty()) reports.push_back(ReadFileBytes(dir / "report.json"));
  }
  fs::remove_all(root);
  if (!failure.empty()) return {false, failure};
  const bool same = reports[0] == reports[1];
  return {same, Fmt("reports %s (%zu bytes), %.1fs", same ? "identical" : "differ",
                    reports[0].size(), Seconds(t0))};
}

}  // namespace

int main() {
  const auto guard = [](int id, const std::string &name, std::function<Outcome()> fn) {
    try {
      Report(id, name, fn());
    } catch (const std::exception &e) {
      Report(id, name, {false, std::string("threw: ") + e.what()});
    }
  };
  guard(1, "gradient suite", GradientSuite);
  guard(2, "closed-form identities", ClosedForms);
  guard(3, "metric oracles", MetricOracles);

  std::optional<SeedRun> seed_one;
  double seed_one_secs = 0.0;
  guard(4, "stage-1 end to end", [&] {
    const auto t0 = Clock::now();
    seed_one = TrainSeed(1);
    seed_one_secs = Seconds(t0);
    return StageOne(*seed_one, seed_one_secs);
  });
  guard(5, "ablation ordering", [&] {
    if (!seed_one) return Outcome{false, "seed-1 run unavailable"};
    return AblationOrdering(*seed_one, seed_one_secs);
  });
  guard(6, "stage-2 text alignment", [&] {
    if (!seed_one) return Outcome{false, "seed-1 run unavailable"};
    return StageTwo(*seed_one);
  });
  guard(7, "determinism", Determinism);
  return failures == 0 ? 0 : 1;
}
