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

#include "mmspk/synthdata/corpus_io.h"

#include <fstream>
#include <sstream>

#include "mmspk/encoders/checkpoint.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/util/json_fields.h"

namespace mmspk {

using nlohmann::json;

namespace {

const char *GenderName(Gender g) { return g == Gender::kA ? "A" : "B"; }
const char *PitchName(Pitch p) {
  static const char *kNames[] = {"low", "mid", "high"};
  return kNames[static_cast<int>(p)];
}
const char *TempoName(Tempo t) {
  static const char *kNames[] = {"slow", "mid", "fast"};
  return kNames[static_cast<int>(t)];
}

template <typename Enum>
Enum ParseNamed(const std::string &s, std::initializer_list<const char *> names,
                const char *what) {
  int k = 0;
  for (const char *n : names) {
    if (s == n) return static_cast<Enum>(k);
    ++k;
  }
  throw FormatError(std::string("corpus: invalid ") + what + " '" + s + "'");
}

json MatrixToJson(const Matrix &m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix MatrixFromJson(const json &j) {
  return Matrix(j.at("rows").get<size_t>(), j.at("cols").get<size_t>(),
                j.at("data").get<std::vector<double>>());
}

void Check(bool ok, const std::string &what) {
  if (!ok) throw FormatError("corpus: " + what);
}

}  // namespace

json CorpusConfigToJson(const CorpusConfig &c) {
  return json{{"train_speakers", c.train_speakers},
              {"heldout_speakers", c.heldout_speakers},
              {"latent_dim", c.latent_dim},
              {"feature_dim", c.feature_dim},
              {"nuisance_dim", c.nuisance_dim},
              {"observations_per_speaker", c.observations_per_speaker},
              {"prompts_per_speaker", c.prompts_per_speaker},
              {"noise_scale", c.noise_scale},
              {"nuisance_scale", c.nuisance_scale},
              {"attribute_weight", c.attribute_weight},
              {"seed", c.seed}};
}

void CorpusConfigFromJson(const json &j, CorpusConfig *c) {
  JsonFields f(j, "corpus");
  f.Get("train_speakers", &c->train_speakers);
  f.Get("heldout_speakers", &c->heldout_speakers);
  f.Get("latent_dim", &c->latent_dim);
  f.Get("feature_dim", &c->feature_dim);
  f.Get("nuisance_dim", &c->nuisance_dim);
  f.Get("observations_per_speaker", &c->observations_per_speaker);
  f.Get("prompts_per_speaker", &c->prompts_per_speaker);
  f.Get("noise_scale", &c->noise_scale);
  f.Get("nuisance_scale", &c->nuisance_scale);
  f.Get("attribute_weight", &c->attribute_weight);
  f.Get("seed", &c->seed);
  f.Finish();
}

json ObservationToJson(const Observation &o, int index) {
  json j{{"type", "observation"},
         {"modality", std::string(ModalityName(o.modality))},
         {"speaker", o.speaker}};
  if (index >= 0) j["index"] = index;
  j["feature"] = o.feature;
  j["nuisance"] = o.nuisance;
  j["noise"] = o.noise;
  return j;
}

json PromptToJson(const PromptTokens &p, int index) {
  json j{{"type", "prompt"}, {"speaker", p.speaker}};
  if (index >= 0) j["index"] = index;
  j["tokens"] = p.tokens;
  return j;
}

Observation ObservationFromJson(const json &j) {
  Observation o;
  o.modality = ParseModality(j.at("modality").get<std::string>());
  if (o.modality == Modality::kText)
    throw FormatError("observation records must be speech or face");
  o.speaker = j.value("speaker", -1);
  o.feature = j.at("feature").get<Vector>();
  if (j.contains("nuisance")) o.nuisance = j.at("nuisance").get<Vector>();
  if (j.contains("noise")) o.noise = j.at("noise").get<Vector>();
  return o;
}

PromptTokens PromptFromJson(const json &j) {
  PromptTokens p;
  p.speaker = j.value("speaker", -1);
  p.tokens = j.at("tokens").get<std::vector<TokenId>>();
  return p;
}

std::string CorpusToJsonLines(const Corpus &corpus) {
  std::string out;
  auto emit = [&out](const json &j) {
    out += j.dump();
    out += '\n';
  };
  emit(json{{"type", "corpus"},
            {"format_version", kCorpusFormatVersion},
            {"config", CorpusConfigToJson(corpus.config)}});
  for (Modality m : {Modality::kSpeech, Modality::kFace}) {
    const ObservationModel &model = corpus.ModelFor(m);
    emit(json{{"type", "model"},
              {"modality", std::string(ModalityName(m))},
              {"identity_map", MatrixToJson(model.identity_map)},
              {"nuisance_map", MatrixToJson(model.nuisance_map)}});
  }
  for (const SpeakerProfile &s : corpus.speakers) {
    emit(json{{"type", "speaker"},
              {"id", s.id},
              {"split", std::string(SplitName(s.split))},
              {"latent", s.latent},
              {"gender", GenderName(s.attributes.gender)},
              {"pitch", PitchName(s.attributes.pitch)},
              {"tempo", TempoName(s.attributes.tempo)}});
  }
  for (const SpeakerProfile &s : corpus.speakers) {
    for (Modality m : {Modality::kSpeech, Modality::kFace}) {
      const auto &obs = corpus.ObservationsOf(m, s.id);
      for (size_t k = 0; k < obs.size(); ++k)
        emit(ObservationToJson(obs[k], static_cast<int>(k)));
    }
    const auto &prompts = corpus.prompts[s.id];
    for (size_t k = 0; k < prompts.size(); ++k)
      emit(PromptToJson(prompts[k], static_cast<int>(k)));
  }
  return out;
}

Corpus CorpusFromJsonLines(const std::string &text) {
  Corpus corpus;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "corpus") {
        Check(!have_header, "duplicate header");
        Check(j.at("format_version").get<int>() == kCorpusFormatVersion,
              "unsupported format version");
        CorpusConfigFromJson(j.at("config"), &corpus.config);
        corpus.config.Validate();
        const size_t total = static_cast<size_t>(
            corpus.config.train_speakers + corpus.config.heldout_speakers);
        corpus.speakers.resize(total);
        corpus.speech.resize(total);
        corpus.face.resize(total);
        corpus.prompts.resize(total);
        have_header = true;
        continue;
      }
      Check(have_header, "first record must be the corpus header");
      if (type == "model") {
        ObservationModel m{MatrixFromJson(j.at("identity_map")),
                           MatrixFromJson(j.at("nuisance_map"))};
        Modality mod = ParseModality(j.at("modality").get<std::string>());
        (mod == Modality::kSpeech ? corpus.speech_model : corpus.face_model) =
            std::move(m);
      } else if (type == "speaker") {
        const int id = j.at("id").get<int>();
        Check(id >= 0 && static_cast<size_t>(id) < corpus.speakers.size(),
              "speaker id out of range");
        SpeakerProfile &s = corpus.speakers[id];
        s.id = id;
        const std::string split = j.at("split").get<std::string>();
        Check(split == "train" || split == "heldout", "unknown split");
        s.split = split == "train" ? Split::kTrain : Split::kHeldOut;
        Check((s.split == Split::kHeldOut) == (id >= corpus.config.train_speakers),
              "speaker split disagrees with config");
        s.latent = j.at("latent").get<Vector>();
        s.attributes.gender = ParseNamed<Gender>(
            j.at("gender").get<std::string>(), {"A", "B"}, "gender");
        s.attributes.pitch = ParseNamed<Pitch>(
            j.at("pitch").get<std::string>(), {"low", "mid", "high"}, "pitch");
        s.attributes.tempo = ParseNamed<Tempo>(
            j.at("tempo").get<std::string>(), {"slow", "mid", "fast"}, "tempo");
      } else if (type == "observation") {
        Observation o = ObservationFromJson(j);
        Check(o.speaker >= 0 &&
                  static_cast<size_t>(o.speaker) < corpus.speakers.size(),
              "observation references unknown speaker");
        auto &list =
            o.modality == Modality::kSpeech ? corpus.speech : corpus.face;
        list[o.speaker].push_back(std::move(o));
      } else if (type == "prompt") {
        PromptTokens p = PromptFromJson(j);
        Check(p.speaker >= 0 &&
                  static_cast<size_t>(p.speaker) < corpus.speakers.size(),
              "prompt references unknown speaker");
        corpus.prompts[p.speaker].push_back(std::move(p));
      } else {
        Check(false, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception &e) {
    throw FormatError("corpus line " + std::to_string(line_no) + ": " +
                      e.what());
  } catch (const Error &e) {
    if (dynamic_cast<const FormatError *>(&e)) throw;
    throw FormatError("corpus line " + std::to_string(line_no) + ": " +
                      e.what());
  }
  Check(have_header, "missing header");
  for (size_t id = 0; id < corpus.speakers.size(); ++id) {
    Check(corpus.speakers[id].id == static_cast<int>(id) &&
              !corpus.speakers[id].latent.empty(),
          "missing speaker record " + std::to_string(id));
    Check(corpus.speech[id].size() >= 2 && corpus.face[id].size() >= 2,
          "speaker " + std::to_string(id) + " lacks observations");
    Check(!corpus.prompts[id].empty(),
          "speaker " + std::to_string(id) + " lacks prompts");
  }
  Check(!corpus.speech_model.identity_map.empty() &&
            !corpus.face_model.identity_map.empty(),
        "missing observation model");
  return corpus;
}

void WriteCorpus(const std::filesystem::path &path, const Corpus &corpus) {
  WriteFileBytes(path, CorpusToJsonLines(corpus));
}

Corpus ReadCorpus(const std::filesystem::path &path) {
  return CorpusFromJsonLines(ReadFileBytes(path));
}

}  // namespace mmspk
