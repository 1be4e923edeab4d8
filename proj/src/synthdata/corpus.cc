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

#include "mmspk/synthdata/corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mmspk/numerics/errors.h"
#include "mmspk/numerics/random.h"

namespace mmspk {

namespace {

// Tertile boundary of the standard normal.
constexpr double kTertile = 0.4307272992954576;

enum Stream : uint64_t {
  kStreamModels = 1,
  kStreamLatents = 2,
  kStreamSpeech = 100,
  kStreamFace = 200,
  kStreamPrompts = 300,
  kStreamAugment = 400,
};

constexpr std::array<std::string_view, kVocabularySize> kVocabulary = {
    "gender-a", "gender-b", "pitch-low", "pitch-mid", "pitch-high",
    "tempo-slow", "tempo-mid", "tempo-fast",
    // fillers
    "voice", "speaker", "tone", "a", "with", "sounds", "clear", "calm",
    "young", "adult", "warm", "bright", "soft", "steady", "person", "and",
    "quite", "very", "slightly", "talks", "reads", "style", "natural",
    "timbre"};

int Tertile(double v) {
  if (v < -kTertile) return 0;
  if (v > kTertile) return 2;
  return 1;
}

ObservationModel MakeModel(const CorpusConfig &c, Rng *rng) {
  ObservationModel m;
  m.identity_map = GaussianMatrix(c.feature_dim, c.latent_dim,
                                  1.0 / std::sqrt(c.latent_dim), rng);
  m.nuisance_map = GaussianMatrix(c.feature_dim, c.nuisance_dim,
                                  1.0 / std::sqrt(c.nuisance_dim), rng);
  for (size_t r = 0; r < m.identity_map.rows(); ++r)
    for (size_t k = 0; k < kNumAttributeCoordinates; ++k)
      m.identity_map(r, k) *= c.attribute_weight;
  return m;
}

Observation Render(const CorpusConfig &c, const ObservationModel &model,
                   Modality modality, const SpeakerProfile &speaker, Rng *rng) {
  Observation o;
  o.modality = modality;
  o.speaker = speaker.id;
  o.nuisance = GaussianVector(c.nuisance_dim, c.nuisance_scale, rng);
  o.noise = GaussianVector(c.feature_dim, c.noise_scale, rng);
  o.feature = MatVec(model.identity_map, speaker.latent);
  Axpy(1.0, MatVec(model.nuisance_map, o.nuisance), o.feature);
  Axpy(1.0, o.noise, o.feature);
  return o;
}

// Both genders must appear in a split so gender clusters are defined.
void EnsureBothGenders(std::vector<SpeakerProfile> *speakers, int begin,
                       int end) {
  bool has_a = false, has_b = false;
  for (int i = begin; i < end; ++i) {
    has_a |= (*speakers)[i].attributes.gender == Gender::kA;
    has_b |= (*speakers)[i].attributes.gender == Gender::kB;
  }
  if (has_a && has_b) return;
  SpeakerProfile &last = (*speakers)[end - 1];
  last.latent[0] = -last.latent[0];
  if (last.latent[0] == 0.0) last.latent[0] = has_a ? -1.0 : 1.0;
  last.attributes = AttributesFromLatent(last.latent);
}

}  // namespace

void CorpusConfig::Validate() const {
  if (train_speakers < 2 || heldout_speakers < 2)
    throw ConfigError("corpus: need at least 2 speakers per split");
  if (observations_per_speaker < 2)
    throw ConfigError("corpus: need at least 2 observations per modality");
  if (prompts_per_speaker < 1)
    throw ConfigError("corpus: need at least 1 prompt per speaker");
  if (latent_dim < 3)
    throw ConfigError("corpus: latent_dim must be >= 3 (attribute coordinates)");
  if (feature_dim < 1 || nuisance_dim < 1)
    throw ConfigError("corpus: dimensions must be positive");
  if (!(noise_scale >= 0.0) || !(nuisance_scale >= 0.0))
    throw ConfigError("corpus: scales must be >= 0");
  if (!(attribute_weight > 0.0))
    throw ConfigError("corpus: attribute_weight must be > 0");
}

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kHeldOut:
      return "heldout";
  }
  return "train";
}

std::vector<int> Corpus::IdsOf(Split split) const {
  std::vector<int> ids;
  for (const SpeakerProfile &s : speakers)
    if (s.split == split) ids.push_back(s.id);
  return ids;
}

std::vector<int> Corpus::TrainIds() const { return IdsOf(Split::kTrain); }
std::vector<int> Corpus::HeldOutIds() const { return IdsOf(Split::kHeldOut); }


const ObservationModel &Corpus::ModelFor(Modality m) const {
  if (m == Modality::kSpeech) return speech_model;
  if (m == Modality::kFace) return face_model;
  throw DomainError("corpus: no observation model for text");
}

const std::vector<Observation> &Corpus::ObservationsOf(Modality m,
                                                       int speaker) const {
  if (speaker < 0 || static_cast<size_t>(speaker) >= speakers.size())
    throw DomainError("corpus: unknown speaker " + std::to_string(speaker));
  if (m == Modality::kSpeech) return speech[speaker];
  if (m == Modality::kFace) return face[speaker];
  throw DomainError("corpus: text has no observations");
}

SpeakerAttributes AttributesFromLatent(std::span<const double> latent) {
  if (latent.size() < 3)
    throw ShapeError("AttributesFromLatent: need at least 3 coordinates");
  SpeakerAttributes a;
  a.gender = latent[0] >= 0.0 ? Gender::kA : Gender::kB;
  a.pitch = static_cast<Pitch>(Tertile(latent[1]));
  a.tempo = static_cast<Tempo>(Tertile(latent[2]));
  return a;
}

Corpus GenerateCorpus(const CorpusConfig &config) {
  config.Validate();
  Corpus corpus;
  corpus.config = config;

  Rng model_rng = MakeRng(config.seed, kStreamModels);
  corpus.speech_model = MakeModel(config, &model_rng);
  corpus.face_model = MakeModel(config, &model_rng);

  const int total = config.train_speakers + config.heldout_speakers;
  Rng latent_rng = MakeRng(config.seed, kStreamLatents);
  for (int id = 0; id < total; ++id) {
    SpeakerProfile s;
    s.id = id;
    s.split = id < config.train_speakers ? Split::kTrain : Split::kHeldOut;
    s.latent = GaussianVector(config.latent_dim, 1.0, &latent_rng);
    s.attributes = AttributesFromLatent(s.latent);
    corpus.speakers.push_back(std::move(s));
  }
  EnsureBothGenders(&corpus.speakers, 0, config.train_speakers);
  EnsureBothGenders(&corpus.speakers, config.train_speakers, total);

  corpus.speech.resize(total);
  corpus.face.resize(total);
  corpus.prompts.resize(total);
  for (int id = 0; id < total; ++id) {
    const SpeakerProfile &s = corpus.speakers[id];
    Rng speech_rng = MakeRng(config.seed, kStreamSpeech + 1000ULL * id);
    Rng face_rng = MakeRng(config.seed, kStreamFace + 1000ULL * id);
    for (int k = 0; k < config.observations_per_speaker; ++k) {
      corpus.speech[id].push_back(Render(config, corpus.speech_model,
                                         Modality::kSpeech, s, &speech_rng));
      corpus.face[id].push_back(
          Render(config, corpus.face_model, Modality::kFace, s, &face_rng));
    }
    for (int k = 0; k < config.prompts_per_speaker; ++k) {
      PromptTokens p = RenderPrompt(
          s.attributes,
          DeriveSeed(config.seed, kStreamPrompts + 1000ULL * id + k));
      p.speaker = id;
      corpus.prompts[id].push_back(std::move(p));
    }
  }
  return corpus;
}

TokenId GenderToken(Gender g) { return static_cast<TokenId>(g); }
TokenId PitchToken(Pitch p) { return 2 + static_cast<TokenId>(p); }
TokenId TempoToken(Tempo t) { return 5 + static_cast<TokenId>(t); }

std::string_view TokenText(TokenId id) {
  if (id < 0 || id >= kVocabularySize)
    throw DomainError("token id " + std::to_string(id) + " outside vocabulary");
  return kVocabulary[static_cast<size_t>(id)];
}

PromptTokens RenderPrompt(const SpeakerAttributes &attributes, uint64_t seed) {
  Rng rng(DeriveSeed(seed, 0));
  std::uniform_int_distribution<int> num_fillers(0, 6);
  std::uniform_int_distribution<TokenId> filler(kNumKeywords,
                                                kVocabularySize - 1);
  PromptTokens p;
  p.tokens = {GenderToken(attributes.gender), PitchToken(attributes.pitch),
              TempoToken(attributes.tempo)};
  const int fillers = num_fillers(rng);
  for (int k = 0; k < fillers; ++k) p.tokens.push_back(filler(rng));
  std::shuffle(p.tokens.begin(), p.tokens.end(), rng);
  return p;
}

Observation AugmentObservation(const Corpus &corpus, const Observation &obs,
                               double strength, uint64_t seed) {
  if (!(strength >= 0.0))
    throw DomainError("AugmentObservation: strength must be >= 0");
  const CorpusConfig &c = corpus.config;
  const ObservationModel &model = corpus.ModelFor(obs.modality);
  if (obs.nuisance.size() != model.nuisance_map.cols() ||
      obs.noise.size() != model.identity_map.rows())
    throw ShapeError("AugmentObservation: observation does not match corpus");
  Rng rng = MakeRng(seed, kStreamAugment);
  Vector d_nuisance = GaussianVector(obs.nuisance.size(),
                                     strength * c.nuisance_scale, &rng);
  Vector d_noise = GaussianVector(obs.noise.size(), strength * c.noise_scale,
                                  &rng);
  Observation out = obs;
  Axpy(1.0, d_nuisance, out.nuisance);
  Axpy(1.0, d_noise, out.noise);
  Axpy(1.0, MatVec(model.nuisance_map, d_nuisance), out.feature);
  Axpy(1.0, d_noise, out.feature);
  return out;
}

Vector IdentityComponent(const Corpus &corpus, const Observation &obs) {
  const ObservationModel &model = corpus.ModelFor(obs.modality);
  Vector id = obs.feature;
  Axpy(-1.0, MatVec(model.nuisance_map, obs.nuisance), id);
  Axpy(-1.0, obs.noise, id);
  return id;
}

}  // namespace mmspk
