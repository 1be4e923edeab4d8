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

#ifndef MMSPK_PIPELINE_BUNDLE_H_
#define MMSPK_PIPELINE_BUNDLE_H_

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "mmspk/encoders/mlp_encoder.h"
#include "mmspk/encoders/text_encoder.h"
#include "mmspk/losses/loss_config.h"
#include "mmspk/synthdata/corpus.h"

namespace mmspk {

inline constexpr int kBundleFormatVersion = 1;

// Everything the stages produce. Stage 0 fills speech, face_teacher and
// speech_classifier; stage 1 fills face and classifier; stage 2 fills text.
// The speech encoder doubles as the speech teacher.
struct ModelBundle {
  std::optional<MlpEncoder> speech;
  std::optional<MlpEncoder> face_teacher;
  std::optional<ClassifierWeights> speech_classifier;
  std::optional<MlpEncoder> face;
  std::optional<ClassifierWeights> classifier;
  std::optional<TextEncoder> text;

  bool HasStage(int stage) const;

  friend bool operator==(const ModelBundle &, const ModelBundle &) = default;
};

// Writes one checkpoint per present part plus manifest.json. `extra` is
// merged into the manifest (config echo, seeds, ablation). Throws
// FormatError on I/O failure.
void SaveBundle(const std::filesystem::path &dir, const ModelBundle &bundle,
                const nlohmann::json &extra = nlohmann::json::object());

// Throws StateError when the directory or manifest is missing and
// FormatError on a version mismatch, checksum mismatch or damaged part.
// Nothing is returned unless every listed part loads.
ModelBundle LoadBundle(const std::filesystem::path &dir);
nlohmann::json ReadBundleManifest(const std::filesystem::path &dir);

// FNV-1a over the serialized parts, as 16 hex digits.
std::string BundleFingerprint(const ModelBundle &bundle);

// Routes an input to the encoder of its modality. Throws StateError when
// that encoder has not been trained.
Embedding EmbedAny(const ModelBundle &bundle, const Observation &input);
Embedding EmbedAny(const ModelBundle &bundle, const PromptTokens &input);

}  // namespace mmspk

#endif  // MMSPK_PIPELINE_BUNDLE_H_
