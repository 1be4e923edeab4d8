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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mmspk/cli/commands.h"
#include "mmspk/cli/run_config.h"
#include "mmspk/encoders/checkpoint.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/synthdata/corpus_io.h"

using namespace mmspk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result Run(std::vector<std::string> args, CliEnvironment env = {}) {
  std::ostringstream out, err;
  Result r;
  r.code = RunCli(args, env, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// A scratch directory with a small, fast config.
class Workspace {
 public:
  explicit Workspace(const std::string &name)
      : root_(fs::temp_directory_path() / ("mmspk_cli_test_" + name)) {
    fs::remove_all(root_);
    fs::create_directories(root_);
    Write("cfg.json", SmallConfig().dump());
  }
  ~Workspace() { fs::remove_all(root_); }

  static json SmallConfig() {
    return json{{"corpus",
                 {{"train_speakers", 12},
                  {"heldout_speakers", 6},
                  {"observations_per_speaker", 4},
                  {"prompts_per_speaker", 3}}},
                {"train", {{"steps", 30}, {"batch_size", 8}, {"log_every", 10}}},
                {"seed", 7}};
  }

  std::string operator()(const std::string &rel) const {
    return (root_ / rel).string();
  }
  void Write(const std::string &rel, const std::string &text) const {
    std::ofstream(root_ / rel, std::ios::binary) << text;
  }
  std::string Read(const std::string &rel) const {
    return ReadFileBytes(root_ / rel);
  }

 private:
  fs::path root_;
};

void GenAndTrain(const Workspace &w) {
  REQUIRE(Run({"gen-data", "--config", w("cfg.json"), "--out", w("data")}).code == 0);
  REQUIRE(Run({"train", "--config", w("cfg.json"), "--corpus", w("data"),
               "--checkpoint", w("ck")})
              .code == 0);
}

}  // namespace

TEST_CASE("run config parsing") {
  RunConfig c = RunConfigFromJson(json::object());
  CHECK_FALSE(c.seed.has_value());
  CHECK(c.corpus.train_speakers == 64);

  c = RunConfigFromJson(json{{"seed", 42}});
  CHECK(c.corpus.seed == 42);
  CHECK(c.train.seed == 42);
  CHECK(c.eval.trials.seed == 42);

  c = RunConfigFromJson(json::object(), std::string("9"));
  CHECK(c.train.seed == 9);
  CHECK_THROWS_AS(RunConfigFromJson(json{{"seed", 1}}, std::string("9")),
                  ConfigError);
  CHECK_THROWS_AS(RunConfigFromJson(json::object(), std::string("x1")),
                  ConfigError);
  CHECK_THROWS_AS(
      RunConfigFromJson(json{{"seed", 1}, {"train", {{"seed", 2}}}}),
      ConfigError);
  CHECK_THROWS_AS(RunConfigFromJson(json{{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(RunConfigFromJson(json{{"extra", 1}}), ConfigError);
  CHECK_THROWS_AS(RunConfigFromJson(json{{"train", {{"steps", 0}}}}), ConfigError);

  // Per-section seeds are fine without a global one.
  c = RunConfigFromJson(json{{"corpus", {{"seed", 3}}}, {"eval", {{"seed", 4}}}});
  CHECK(c.corpus.seed == 3);
  CHECK(c.eval.trials.seed == 4);

  // The echo loads back to the same config.
  for (const json &j : {json::object(), Workspace::SmallConfig()}) {
    const RunConfig a = RunConfigFromJson(j);
    const RunConfig b = RunConfigFromJson(RunConfigToJson(a));
    CHECK(RunConfigToJson(a) == RunConfigToJson(b));
    CHECK(RunConfigHash(a) == RunConfigHash(b));
  }
  CHECK(RunConfigHash(RunConfigFromJson(json{{"seed", 1}})) !=
        RunConfigHash(RunConfigFromJson(json{{"seed", 2}})));
}

TEST_CASE("gen-data") {
  Workspace w("gen");
  Result r = Run({"gen-data", "--config", w("cfg.json"), "--out", w("a")});
  CHECK(r.code == 0);
  CHECK(Run({"gen-data", "--config", w("cfg.json"), "--out", w("b")}).code == 0);
  CHECK(w.Read("a/corpus.jsonl") == w.Read("b/corpus.jsonl"));
  CHECK(w.Read("a/manifest.json") == w.Read("b/manifest.json"));
  CHECK_FALSE(fs::exists(w("a/.mmspk.lock")));

  json m = json::parse(w.Read("a/manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["config"]["corpus"]["train_speakers"] == 12);
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(ReadCorpus(w("a/corpus.jsonl")).speakers.size() == 18);

  w.Write("bad.json", R"({"corpus": {"speakerz": 3}})");
  r = Run({"gen-data", "--config", w("bad.json"), "--out", w("c")});
  CHECK(r.code == 2);
  CHECK(r.err.find("corpus.speakerz") != std::string::npos);

  w.Write("broken.json", "{");
  CHECK(Run({"gen-data", "--config", w("broken.json"), "--out", w("c")}).code == 2);
  CHECK(Run({"gen-data", "--config", w("missing.json"), "--out", w("c")}).code == 1);
  CHECK(Run({"gen-data"}).code == 2);
  CHECK(Run({"frobnicate"}).code == 2);
}

TEST_CASE("seed from the environment") {
  Workspace w("env");
  w.Write("noseed.json", R"({"corpus": {"train_speakers": 4, "heldout_speakers": 2}})");
  CliEnvironment env{std::string("11")};
  CHECK(Run({"gen-data", "--config", w("noseed.json"), "--out", w("a")}, env).code == 0);
  CHECK(json::parse(w.Read("a/manifest.json"))["seed"] == 11);

  Result r = Run({"gen-data", "--config", w("cfg.json"), "--out", w("b")}, env);
  CHECK(r.code == 2);
  CHECK(r.err.find(kSeedEnvVar) != std::string::npos);
}

TEST_CASE("train") {
  Workspace w("train");
  REQUIRE(Run({"gen-data", "--config", w("cfg.json"), "--out", w("data")}).code == 0);
  const std::vector<std::string> base{"train", "--config", w("cfg.json"),
                                      "--corpus", w("data"), "--checkpoint", w("ck")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return Run(a);
  };
  CHECK(with({"--stage", "1"}).code == 3);
  CHECK(with({"--stage", "5"}).code == 2);
  CHECK(with({"--ablate", "no-xx"}).code == 2);

  CHECK(with({"--stage", "0"}).code == 0);
  CHECK(with({"--stage", "2"}).code == 3);
  CHECK(with({"--stage", "1", "--ablate", "no-kd"}).code == 0);
  json m = json::parse(w.Read("ck/manifest.json"));
  CHECK(m["ablation"] == "no-kd");
  CHECK(m["effective_weights"]["kd"] == 0.0);
  CHECK(m["stages"] == json::array({0, 1}));
  CHECK(with({"--stage", "2"}).code == 0);
  m = json::parse(w.Read("ck/manifest.json"));
  CHECK(m["stages"] == json::array({0, 1, 2}));
  CHECK(m["ablation"] == "no-kd");
  CHECK(m["runs"].size() == 3);
  CHECK(m["seeds"]["train"] == 7);

  // The log only grows.
  const std::string log = w.Read("ck/train_log.jsonl");
  CHECK(with({}).code == 0);
  const std::string longer = w.Read("ck/train_log.jsonl");
  CHECK(longer.size() > log.size());
  CHECK(longer.compare(0, log.size(), log) == 0);
  json first = json::parse(log.substr(0, log.find('\n')));
  for (const char *key : {"stage", "step", "ce", "kd", "cl", "total"})
    CHECK(first.contains(key));

  m = json::parse(w.Read("ck/manifest.json"));
  CHECK(m["effective_weights"]["kd"] == 10.0);

  // Later stages refuse a checkpoint trained on another corpus.
  json other = Workspace::SmallConfig();
  other["seed"] = 8;
  w.Write("other.json", other.dump());
  REQUIRE(Run({"gen-data", "--config", w("other.json"), "--out", w("data2")}).code == 0);
  CHECK(Run({"train", "--config", w("other.json"), "--corpus", w("data2"),
             "--checkpoint", w("ck"), "--stage", "2"})
            .code == 2);

  CHECK(Run({"train", "--config", w("cfg.json"), "--corpus", w("nowhere"),
             "--checkpoint", w("ck2")})
            .code == 1);
}

TEST_CASE("train reports divergence") {
  Workspace w("diverge");
  json cfg = Workspace::SmallConfig();
  cfg["train"]["learning_rate"] = 1e300;
  w.Write("hot.json", cfg.dump());
  REQUIRE(Run({"gen-data", "--config", w("hot.json"), "--out", w("data")}).code == 0);
  Result r = Run({"train", "--config", w("hot.json"), "--corpus", w("data"),
                  "--checkpoint", w("ck")});
  CHECK(r.code == 4);
  CHECK(r.err.find("stage 0") != std::string::npos);
}

TEST_CASE("output directories are locked") {
  Workspace w("lock");
  fs::create_directories(w("data"));
  w.Write("data/.mmspk.lock", "");
  Result r = Run({"gen-data", "--config", w("cfg.json"), "--out", w("data")});
  CHECK(r.code == 1);
  CHECK(r.err.find("locked") != std::string::npos);
  CHECK(fs::exists(w("data/.mmspk.lock")));
}

TEST_CASE("eval") {
  Workspace w("eval");
  GenAndTrain(w);
  const std::vector<std::string> args{"eval", "--config", w("cfg.json"), "--bundle",
                                      w("ck"), "--corpus", w("data"), "--report",
                                      w("r1.json")};
  CHECK(Run(args).code == 0);
  std::vector<std::string> again = args;
  again.back() = w("r2.json");
  CHECK(Run(again).code == 0);
  CHECK(w.Read("r1.json") == w.Read("r2.json"));
  CHECK(w.Read("r1.det.csv") == w.Read("r2.det.csv"));
  CHECK(w.Read("r1.scores.txt") == w.Read("r2.scores.txt"));
  json report = json::parse(w.Read("r1.json"));
  for (const char *key : {"eer", "min_dcf", "silhouette", "trials", "retrieval"})
    CHECK(report.contains(key));
  CHECK(report["silhouette"]["value"].is_number());

  // A stage-1 bundle cannot give the prompt silhouette.
  CHECK(Run({"train", "--config", w("cfg.json"), "--corpus", w("data"),
             "--checkpoint", w("ck"), "--stage", "1"})
            .code == 0);
  CHECK(Run(args).code == 3);
  CHECK(Run({"eval", "--bundle", w("nothing"), "--corpus", w("data"), "--report",
             w("r3.json")})
            .code == 3);
}

TEST_CASE("embed") {
  Workspace w("embed");
  GenAndTrain(w);
  const Corpus corpus = ReadCorpus(w("data/corpus.jsonl"));
  std::string input;
  input += ObservationToJson(corpus.speech[1][0]).dump() + "\n";
  input += ObservationToJson(corpus.face[2][1]).dump() + "\n";
  json prompt = PromptToJson(corpus.prompts[3][0]);
  prompt["modality"] = "text";
  input += prompt.dump() + "\n\n";
  input += R"({"modality": "face", "feature": )" +
           json(corpus.face[0][0].feature).dump() + "}\n";
  w.Write("in.jsonl", input);
  REQUIRE(Run({"embed", "--bundle", w("ck"), "--input", w("in.jsonl"), "--output",
               w("out.txt")})
              .code == 0);
  std::istringstream lines(w.Read("out.txt"));
  std::string line;
  std::vector<std::string> modalities, speakers;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string m, s;
    fields >> m >> s;
    modalities.push_back(m);
    speakers.push_back(s);
    double v, sq = 0;
    int d = 0;
    while (fields >> v) {
      sq += v * v;
      ++d;
    }
    CHECK(d == 16);
    CHECK(std::abs(sq - 1.0) < 1e-12);
  }
  CHECK(modalities == std::vector<std::string>{"speech", "face", "text", "face"});
  CHECK(speakers == std::vector<std::string>{"1", "2", "3", "-"});

  w.Write("empty.jsonl", "");
  CHECK(Run({"embed", "--bundle", w("ck"), "--input", w("empty.jsonl"), "--output",
             w("empty.txt")})
            .code == 0);
  CHECK(w.Read("empty.txt").empty());

  std::string bad;
  for (int i = 0; i < 6; ++i) bad += ObservationToJson(corpus.speech[0][0]).dump() + "\n";
  for (const std::string &junk :
       {std::string("{not json"), std::string(R"({"modality": "smell"})"),
        std::string(R"({"modality": "speech", "feature": [1, 2]})")}) {
    w.Write("bad.jsonl", bad + junk + "\n");
    Result r = Run({"embed", "--bundle", w("ck"), "--input", w("bad.jsonl"),
                    "--output", w("bad.txt")});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 7") != std::string::npos);
    CHECK_FALSE(fs::exists(w("bad.txt")));
  }

  CHECK(Run({"train", "--config", w("cfg.json"), "--corpus", w("data"),
             "--checkpoint", w("ck"), "--stage", "1"})
            .code == 0);
  w.Write("text.jsonl", prompt.dump() + "\n");
  CHECK(Run({"embed", "--bundle", w("ck"), "--input", w("text.jsonl"), "--output",
             w("t.txt")})
            .code == 3);
}
