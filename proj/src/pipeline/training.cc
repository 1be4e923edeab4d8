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

#include "mmspk/pipeline/training.h"

#include <cmath>
#include <string>

#include "mmspk/numerics/adam.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/numerics/random.h"
#include "mmspk/synthdata/sampler.h"

namespace mmspk {

namespace {

enum StageTag : uint64_t {
  kTagSpeechPretrain = 10,
  kTagFaceTeacher = 11,
  kTagFace = 12,
  kTagText = 13,
};

enum Stream : uint64_t { kInit = 1, kBatch = 2, kAugment = 3, kBatchFace = 4 };

uint64_t StepSeed(uint64_t base, Stream stream, int step) {
  return DeriveSeed(DeriveSeed(base, stream), static_cast<uint64_t>(step));
}

// Adam over a fixed list of parameter blocks with optional global-norm
// clipping.
class Optimizer {
 public:
  Optimizer(std::vector<Matrix *> params, const TrainConfig &cfg)
      : params_(std::move(params)), clip_(cfg.grad_clip) {
    AdamOptions opts;
    opts.learning_rate = cfg.learning_rate;
    for (Matrix *p : params_) states_.push_back(AdamState::ForShape(*p, opts));
  }

  void Step(std::vector<Matrix> grads) {
    if (clip_ > 0.0) {
      double sq = 0.0;
      for (const Matrix &g : grads)
        for (double x : g.data()) sq += x * x;
      const double norm = std::sqrt(sq);
      if (norm > clip_)
        for (Matrix &g : grads)
          for (double &x : g.data()) x *= clip_ / norm;
    }
    for (size_t k = 0; k < params_.size(); ++k)
      AdamStepInPlace(grads[k], params_[k], &states_[k]);
  }

 private:
  std::vector<Matrix *> params_;
  std::vector<AdamState> states_;
  double clip_;
};

bool ShouldLog(const TrainConfig &cfg, int step) {
  return step % cfg.log_every == 0 || step == cfg.steps - 1;
}

// Runs fn(step) for every step, reporting numeric failures as training
// errors at that step.
template <typename Fn>
void ForEachStep(int steps, int stage, Fn &&fn) {
  for (int step = 0; step < steps; ++step) {
    try {
      fn(step);
    } catch (const NumericError &e) {
      throw TrainingError(e.what(), stage, step);
    }
  }
}

void RequireFinite(double loss, int stage, int step) {
  if (!std::isfinite(loss))
    throw TrainingError("non-finite loss", stage, step);
}

// Embeddings of every observation of `modality`, indexed [speaker][k].
std::vector<EmbeddingBatch> EmbedAll(const Corpus &corpus,
                                     const MlpEncoder &encoder,
                                     Modality modality) {
  std::vector<EmbeddingBatch> out(corpus.speakers.size());
  for (const SpeakerProfile &s : corpus.speakers)
    for (const Observation &o : corpus.ObservationsOf(modality, s.id))
      out[s.id].push_back(encoder.Encode(o.feature).values);
  return out;
}

ClassifierPretrainResult PretrainClassifier(const Corpus &corpus,
                                            const TrainConfig &cfg,
                                            Modality modality, uint64_t tag) {
  cfg.Validate();
  const uint64_t base = DeriveSeed(cfg.seed, tag);
  const size_t d = static_cast<size_t>(cfg.embedding_dim);
  Rng init = MakeRng(base, kInit);
  ClassifierPretrainResult r{
      MlpEncoder::Random(static_cast<size_t>(corpus.config.feature_dim),
                         {static_cast<size_t>(cfg.hidden_dim)}, d, modality,
                         &init),
      ClassifierWeights::Random(d, static_cast<size_t>(corpus.num_train()),
                                &init),
      {}};
  std::vector<Matrix *> params = r.encoder.Parameters();
  params.push_back(r.classifier.mutable_matrix());
  Optimizer opt(params, cfg);

  const size_t n = static_cast<size_t>(cfg.batch_size);
  std::vector<MlpCache> caches(n);
  ForEachStep(cfg.steps, 0, [&](int step) {
    PairBatch b = SamplePairBatch(corpus, Pairing::kFaceSpeech, n,
                                  StepSeed(base, kBatch, step));
    EmbeddingBatch emb(n);
    for (size_t i = 0; i < n; ++i) {
      const int spk = b.speakers[i];
      const Observation &o = modality == Modality::kSpeech
                                 ? corpus.speech[spk][b.second[i]]
                                 : corpus.face[spk][b.first[i]];
      emb[i] = r.encoder.Encode(o.feature, &caches[i]).values;
    }
    MarginSoftmaxResult loss =
        AdditiveMarginLoss(emb, b.speakers, r.classifier, cfg.loss.scale,
                           cfg.loss.margin);
    RequireFinite(loss.loss, 0, step);
    if (ShouldLog(cfg, step))
      r.log.push_back({0, step, loss.loss, 0.0, 0.0, loss.loss});

    ParameterGradients grads = r.encoder.ZeroGradients();
    for (size_t i = 0; i < n; ++i)
      AccumulateGradients(r.encoder.Backprop(caches[i], loss.grad_features[i]),
                          &grads);
    grads.push_back(std::move(loss.grad_weights));
    opt.Step(std::move(grads));
    r.classifier.Renormalize();
  });
  return r;
}

}  // namespace

ClassifierPretrainResult PretrainSpeechEncoder(const Corpus &corpus,
                                               const TrainConfig &cfg) {
  return PretrainClassifier(corpus, cfg, Modality::kSpeech, kTagSpeechPretrain);
}

ClassifierPretrainResult PretrainFaceTeacher(const Corpus &corpus,
                                             const TrainConfig &cfg) {
  return PretrainClassifier(corpus, cfg, Modality::kFace, kTagFaceTeacher);
}

MlpEncoder InitialFaceStudent(const TeacherEncoder &face_teacher) {
  MlpEncoder student = face_teacher.encoder().WithIdentityHead();
  student.set_modality(Modality::kFace);
  return student;
}

FaceStageResult TrainFaceEncoder(const Corpus &corpus,
                                 const TeacherEncoder &speech,
                                 const TeacherEncoder &face_teacher,
                                 const ClassifierWeights &classifier,
                                 const TrainConfig &cfg) {
  cfg.Validate();
  if (classifier.classes() != static_cast<size_t>(corpus.num_train()) ||
      classifier.dim() != speech.output_dim())
    throw ShapeError("TrainFaceEncoder: classifier does not match corpus");
  const uint64_t base = DeriveSeed(cfg.seed, kTagFace);
  const Stage1Weights weights = cfg.EffectiveStage1Weights();
  FaceStageResult r{InitialFaceStudent(face_teacher), classifier, {}};
  std::vector<Matrix *> params = r.face.Parameters();
  params.push_back(r.classifier.mutable_matrix());
  Optimizer opt(params, cfg);

  const std::vector<EmbeddingBatch> speech_emb =
      EmbedAll(corpus, speech.encoder(), Modality::kSpeech);
  const size_t n = static_cast<size_t>(cfg.batch_size);
  std::vector<MlpCache> caches(n);
  ForEachStep(cfg.steps, 1, [&](int step) {
    PairBatch b = SamplePairBatch(corpus, Pairing::kFaceSpeech, n,
                                  StepSeed(base, kBatch, step));
    const uint64_t aug = StepSeed(base, kAugment, step);
    EmbeddingBatch sp(n), teacher(n), student(n);
    for (size_t i = 0; i < n; ++i) {
      const int spk = b.speakers[i];
      Observation face = AugmentObservation(corpus, corpus.face[spk][b.first[i]],
                                            cfg.augment_strength,
                                            DeriveSeed(aug, i));
      sp[i] = speech_emb[spk][b.second[i]];
      teacher[i] = face_teacher.Encode(face.feature).values;
      student[i] = r.face.Encode(face.feature, &caches[i]).values;
    }
    const SimilarityMatrix fused = FuseSimilarity(
        TeacherSimilarity(sp, SimilaritySource::kSpeechTeacher),
        TeacherSimilarity(teacher, SimilaritySource::kFaceTeacher),
        cfg.loss.mu);
    Stage1Result loss = Stage1Loss(
        Stage1Batch{&sp, &student, b.speakers, &r.classifier, &fused}, cfg.loss,
        weights);
    RequireFinite(loss.total, 1, step);
    if (ShouldLog(cfg, step))
      r.log.push_back({1, step, loss.ce, loss.kd, loss.alignment, loss.total});

    ParameterGradients grads = r.face.ZeroGradients();
    for (size_t i = 0; i < n; ++i)
      AccumulateGradients(r.face.Backprop(caches[i], loss.grad_face[i]), &grads);
    grads.push_back(std::move(loss.grad_weights));
    opt.Step(std::move(grads));
    r.classifier.Renormalize();
  });
  return r;
}

TextEncoder InitialTextEncoder(const TrainConfig &cfg) {
  Rng init = MakeRng(DeriveSeed(cfg.seed, kTagText), kInit);
  return TextEncoder::Random(kVocabularySize,
                             static_cast<size_t>(cfg.text_width),
                             {static_cast<size_t>(cfg.hidden_dim)},
                             static_cast<size_t>(cfg.embedding_dim), &init);
}

TextStageResult TrainTextEncoder(const Corpus &corpus,
                                 const TeacherEncoder &speech,
                                 const TeacherEncoder &face,
                                 const TrainConfig &cfg) {
  cfg.Validate();
  const uint64_t base = DeriveSeed(cfg.seed, kTagText);
  TextStageResult r{InitialTextEncoder(cfg), {}};
  Optimizer opt(r.text.Parameters(), cfg);

  const std::vector<EmbeddingBatch> speech_emb =
      EmbedAll(corpus, speech.encoder(), Modality::kSpeech);
  const std::vector<EmbeddingBatch> face_emb =
      EmbedAll(corpus, face.encoder(), Modality::kFace);
  const size_t n = static_cast<size_t>(cfg.batch_size);

  std::vector<PairBatch> batches;
  ForEachStep(cfg.steps, 2, [&](int step) {
    batches.clear();
    if (cfg.text_pairs != TextPairs::kFaceOnly)
      batches.push_back(SamplePairBatch(corpus, Pairing::kTextSpeech, n,
                                        StepSeed(base, kBatch, step)));
    if (cfg.text_pairs != TextPairs::kSpeechOnly)
      batches.push_back(SamplePairBatch(corpus, Pairing::kTextFace, n,
                                        StepSeed(base, kBatchFace, step)));
    EmbeddingBatch text, candidates;
    std::vector<Modality> modalities;
    std::vector<int> labels;
    std::vector<TextCache> caches;
    for (const PairBatch &b : batches) {
      const Modality m = b.SecondModality();
      const auto &table = m == Modality::kSpeech ? speech_emb : face_emb;
      for (size_t i = 0; i < b.size(); ++i) {
        const int spk = b.speakers[i];
        caches.emplace_back();
        text.push_back(
            r.text.Encode(corpus.prompts[spk][b.first[i]].tokens, &caches.back())
                .values);
        candidates.push_back(table[spk][b.second[i]]);
        modalities.push_back(m);
        labels.push_back(spk);
      }
    }
    ContrastiveResult loss =
        TextAlignmentLoss(text, candidates, modalities, labels, cfg.loss.tau);
    RequireFinite(loss.loss, 2, step);
    if (ShouldLog(cfg, step))
      r.log.push_back({2, step, 0.0, 0.0, loss.loss, loss.loss});

    ParameterGradients grads = r.text.ZeroGradients();
    for (size_t i = 0; i < text.size(); ++i)
      AccumulateGradients(r.text.Backprop(caches[i], loss.grad_anchors[i]),
                          &grads);
    opt.Step(std::move(grads));
  });
  return r;
}

double TextValidationLoss(const Corpus &corpus, const MlpEncoder &speech,
                          const MlpEncoder &face, const TextEncoder &text,
                          const LossConfig &loss) {
  EmbeddingBatch anchors, candidates;
  std::vector<Modality> modalities;
  std::vector<int> labels;
  for (Modality m : {Modality::kSpeech, Modality::kFace}) {
    const MlpEncoder &encoder = m == Modality::kSpeech ? speech : face;
    const size_t prompt = m == Modality::kSpeech ? 0 : 1;
    for (int id : corpus.HeldOutIds()) {
      const auto &prompts = corpus.prompts[id];
      anchors.push_back(text.Encode(prompts[prompt % prompts.size()].tokens).values);
      candidates.push_back(
          encoder.Encode(corpus.ObservationsOf(m, id)[0].feature).values);
      modalities.push_back(m);
      labels.push_back(id);
    }
  }
  return TextAlignmentLoss(anchors, candidates, modalities, labels, loss.tau)
      .loss;
}

void RunStage(int stage, const Corpus &corpus, const TrainConfig &cfg,
              ModelBundle *bundle, std::vector<TrainLogEntry> *log) {
  auto append = [log](const std::vector<TrainLogEntry> &entries) {
    if (log) log->insert(log->end(), entries.begin(), entries.end());
  };
  switch (stage) {
    case 0: {
      ClassifierPretrainResult sp = PretrainSpeechEncoder(corpus, cfg);
      ClassifierPretrainResult ft = PretrainFaceTeacher(corpus, cfg);
      append(sp.log);
      append(ft.log);
      *bundle = ModelBundle{};
      bundle->speech = std::move(sp.encoder);
      bundle->speech_classifier = std::move(sp.classifier);
      bundle->face_teacher = std::move(ft.encoder);
      return;
    }
    case 1: {
      if (!bundle->HasStage(0))
        throw StateError("stage 1 needs the stage-0 speech encoder and teacher");
      FaceStageResult r = TrainFaceEncoder(
          corpus, TeacherEncoder(*bundle->speech),
          TeacherEncoder(*bundle->face_teacher),
          *bundle->speech_classifier, cfg);
      append(r.log);
      bundle->face = std::move(r.face);
      bundle->classifier = std::move(r.classifier);
      bundle->text.reset();
      return;
    }
    case 2: {
      if (!bundle->HasStage(0) || !bundle->HasStage(1))
        throw StateError("stage 2 needs the stage-1 face encoder");
      TextStageResult r = TrainTextEncoder(corpus, TeacherEncoder(*bundle->speech),
                                           TeacherEncoder(*bundle->face), cfg);
      append(r.log);
      bundle->text = std::move(r.text);
      return;
    }
  }
  throw ConfigError("stage must be 0, 1 or 2");
}

}  // namespace mmspk
