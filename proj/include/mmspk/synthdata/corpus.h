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

#ifndef MMSPK_SYNTHDATA_CORPUS_H_
#define MMSPK_SYNTHDATA_CORPUS_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mmspk/encoders/modality.h"
#include "mmspk/encoders/text_encoder.h"
#include "mmspk/numerics/matrix.h"

namespace mmspk {

enum class Gender : uint8_t { kA = 0, kB = 1 };
enum class Pitch : uint8_t { kLow = 0, kMid = 1, kHigh = 2 };
enum class Tempo : uint8_t { kSlow = 0, kMid = 1, kFast = 2 };

struct SpeakerAttributes {
  Gender gender = Gender::kA;
  Pitch pitch = Pitch::kMid;
  Tempo tempo = Tempo::kMid;
  friend bool operator==(const SpeakerAttributes &,
                         const SpeakerAttributes &) = default;
};

enum class Split : uint8_t { kTrain = 0, kHeldOut = 1 };

std::string_view SplitName(Split s);

struct SpeakerProfile {
  int id = 0;
  Split split = Split::kTrain;
  Vector latent;  // identity z
  SpeakerAttributes attributes;
  friend bool operator==(const SpeakerProfile &,
                         const SpeakerProfile &) = default;
};

// feature = identity_map * z + nuisance_map * nuisance + noise
struct Observation {
  Modality modality = Modality::kSpeech;
  int speaker = 0;
  Vector feature;
  Vector nuisance;
  Vector noise;
  friend bool operator==(const Observation &, const Observation &) = default;
};

struct PromptTokens {
  int speaker = -1;  // -1 when rendered without an owner
  std::vector<TokenId> tokens;
  friend bool operator==(const PromptTokens &, const PromptTokens &) = default;
};

// Fixed per-modality linear renderer.
struct ObservationModel {
  Matrix identity_map;  // feature_dim x latent_dim
  Matrix nuisance_map;  // feature_dim x nuisance_dim
  friend bool operator==(const ObservationModel &,
                         const ObservationModel &) = default;
};

struct CorpusConfig {
  int train_speakers = 64;
  int heldout_speakers = 16;
  int latent_dim = 12;
  int feature_dim = 32;
  int nuisance_dim = 4;
  int observations_per_speaker = 4;  // per modality
  int prompts_per_speaker = 6;
  double noise_scale = 0.6;
  double nuisance_scale = 1.0;
  // Multiplies the identity-map columns of the attribute coordinates, so
  // larger values make prompts more predictive of the observations.
  double attribute_weight = 4.0;
  uint64_t seed = 1;

  // Throws ConfigError when the configuration cannot be satisfied.
  void Validate() const;
  friend bool operator==(const CorpusConfig &, const CorpusConfig &) = default;
};

// Synthetic multi-speaker corpus. Speakers 0 .. train_speakers-1 form the
// training split and their id doubles as the classifier label; the
// remaining ids are held out.
struct Corpus {
  CorpusConfig config;
  std::vector<SpeakerProfile> speakers;  // indexed by id
  ObservationModel speech_model;
  ObservationModel face_model;
  std::vector<std::vector<Observation>> speech;  // [speaker][k]
  std::vector<std::vector<Observation>> face;    // [speaker][k]
  std::vector<std::vector<PromptTokens>> prompts;

  std::vector<int> TrainIds() const;
  std::vector<int> HeldOutIds() const;
  std::vector<int> IdsOf(Split split) const;
  int num_train() const { return config.train_speakers; }
  const ObservationModel &ModelFor(Modality m) const;
  const std::vector<Observation> &ObservationsOf(Modality m, int speaker) const;

  friend bool operator==(const Corpus &, const Corpus &) = default;
};

// Deterministic in (config, config.seed).
Corpus GenerateCorpus(const CorpusConfig &config);

// ---------------------------------------------------------------------------
// Prompt vocabulary: 8 attribute keywords followed by 24 filler words.

inline constexpr int kVocabularySize = 32;
inline constexpr int kNumKeywords = 8;
inline constexpr int kMaxPromptLength = 16;

TokenId GenderToken(Gender g);
TokenId PitchToken(Pitch p);
TokenId TempoToken(Tempo t);
std::string_view TokenText(TokenId id);

// Three keyword tokens plus 0..6 fillers in a seed-dependent order.
PromptTokens RenderPrompt(const SpeakerAttributes &attributes, uint64_t seed);

// Gender, pitch and tempo are read from the first three latent coordinates.
inline constexpr size_t kNumAttributeCoordinates = 3;

SpeakerAttributes AttributesFromLatent(std::span<const double> latent);

// Redraws the nuisance and noise components with magnitude scaled by
// `strength`; the identity component and speaker id are untouched.
Observation AugmentObservation(const Corpus &corpus, const Observation &obs,
                               double strength, uint64_t seed);

// identity_map * z of the observation's speaker, recovered as
// feature - nuisance_map * nuisance - noise.
Vector IdentityComponent(const Corpus &corpus, const Observation &obs);

}  // namespace mmspk

#endif  // MMSPK_SYNTHDATA_CORPUS_H_
