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

#include "mmspk/pipeline/bundle.h"

#include <cinttypes>
#include <cstdio>

#include "mmspk/encoders/checkpoint.h"
#include "mmspk/numerics/errors.h"

namespace mmspk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kManifestName = "manifest.json";

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

// (file name, serialized bytes) for every present part, in a fixed order.
std::vector<std::pair<std::string, std::string>> Parts(const ModelBundle &b) {
  std::vector<std::pair<std::string, std::string>> parts;
  if (b.speech) parts.emplace_back("speech.enc", SerializeMlp(*b.speech));
  if (b.face_teacher)
    parts.emplace_back("face_teacher.enc", SerializeMlp(*b.face_teacher));
  if (b.speech_classifier)
    parts.emplace_back(
        "speech_classifier.enc",
        SerializeMatrix(b.speech_classifier->matrix(), Modality::kSpeech));
  if (b.face) parts.emplace_back("face.enc", SerializeMlp(*b.face));
  if (b.classifier)
    parts.emplace_back("classifier.enc",
                       SerializeMatrix(b.classifier->matrix(), Modality::kFace));
  if (b.text) parts.emplace_back("text.enc", SerializeText(*b.text));
  return parts;
}

}  // namespace

bool ModelBundle::HasStage(int stage) const {
  switch (stage) {
    case 0:
      return speech && face_teacher && speech_classifier;
    case 1:
      return face && classifier;
    case 2:
      return text.has_value();
  }
  return false;
}

void SaveBundle(const fs::path &dir, const ModelBundle &bundle,
                const json &extra) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create " + dir.string() + ": " + ec.message());
  json manifest = extra;
  manifest["format_version"] = kBundleFormatVersion;
  json stages = json::array();
  for (int s = 0; s <= 2; ++s)
    if (bundle.HasStage(s)) stages.push_back(s);
  manifest["stages"] = stages;
  json files = json::object();
  for (const auto &[name, bytes] : Parts(bundle)) {
    WriteFileBytes(dir / name, bytes);
    files[name] = Hex(Fnv1a64(bytes));
  }
  // Parts left over from an earlier save would only mislead a reader.
  for (const char *name : {"speech.enc", "face_teacher.enc", "speech_classifier.enc",
                           "face.enc", "classifier.enc", "text.enc"})
    if (!files.contains(name)) fs::remove(dir / name, ec);
  manifest["files"] = files;
  manifest["fingerprint"] = BundleFingerprint(bundle);
  WriteFileBytes(dir / kManifestName, manifest.dump(2) + "\n");
}

json ReadBundleManifest(const fs::path &dir) {
  if (!fs::exists(dir / kManifestName))
    throw StateError("no model bundle at " + dir.string());
  try {
    return json::parse(ReadFileBytes(dir / kManifestName));
  } catch (const json::exception &e) {
    throw FormatError("bundle manifest: " + std::string(e.what()));
  }
}

ModelBundle LoadBundle(const fs::path &dir) {
  const json manifest = ReadBundleManifest(dir);
  if (manifest.value("format_version", -1) != kBundleFormatVersion)
    throw FormatError("bundle manifest: unsupported format version");
  if (!manifest.contains("files") || !manifest["files"].is_object())
    throw FormatError("bundle manifest: missing file table");

  ModelBundle b;
  for (auto it = manifest["files"].begin(); it != manifest["files"].end();
       ++it) {
    const std::string &name = it.key();
    const std::string bytes = ReadFileBytes(dir / name);
    if (!it->is_string() || Hex(Fnv1a64(bytes)) != it->get<std::string>())
      throw FormatError("bundle part " + name + " does not match manifest");
    if (name == "speech.enc") {
      b.speech = ParseMlp(bytes);
    } else if (name == "face_teacher.enc") {
      b.face_teacher = ParseMlp(bytes);
    } else if (name == "speech_classifier.enc") {
      b.speech_classifier = ClassifierWeights(ParseMatrix(bytes));
    } else if (name == "face.enc") {
      b.face = ParseMlp(bytes);
    } else if (name == "classifier.enc") {
      b.classifier = ClassifierWeights(ParseMatrix(bytes));
    } else if (name == "text.enc") {
      b.text = ParseText(bytes);
    } else {
      throw FormatError("bundle manifest: unknown part " + name);
    }
  }
  return b;
}

std::string BundleFingerprint(const ModelBundle &bundle) {
  std::string all;
  for (const auto &[name, bytes] : Parts(bundle)) {
    all += name;
    all += bytes;
  }
  return Hex(Fnv1a64(all));
}

Embedding EmbedAny(const ModelBundle &bundle, const Observation &input) {
  const std::optional<MlpEncoder> &encoder =
      input.modality == Modality::kSpeech ? bundle.speech : bundle.face;
  if (input.modality == Modality::kText)
    throw StateError("text inputs must be given as prompt tokens");
  if (!encoder)
    throw StateError(std::string("bundle has no trained ") +
                     std::string(ModalityName(input.modality)) + " encoder");
  return encoder->Encode(input.feature);
}

Embedding EmbedAny(const ModelBundle &bundle, const PromptTokens &input) {
  if (!bundle.text) throw StateError("bundle has no trained text encoder");
  return bundle.text->Encode(input.tokens);
}

}  // namespace mmspk
