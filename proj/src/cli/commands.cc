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

#include "mmspk/cli/commands.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "mmspk/cli/run_config.h"
#include "mmspk/encoders/checkpoint.h"
#include "mmspk/eval/evaluate.h"
#include "mmspk/numerics/errors.h"
#include "mmspk/pipeline/bundle.h"
#include "mmspk/pipeline/training.h"
#include "mmspk/synthdata/corpus_io.h"

namespace mmspk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestFormatVersion = 1;
constexpr char kLockName[] = ".mmspk.lock";
constexpr char kCorpusFile[] = "corpus.jsonl";
constexpr char kTrainLog[] = "train_log.jsonl";

// Failure with a chosen exit code, for conditions that have no natural
// exception type of their own.
class CliError : public Error {
 public:
  CliError(const std::string &what, int code) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// Exclusive lock file inside an output directory, removed on scope exit.
class DirLock {
 public:
  explicit DirLock(const fs::path &dir) : path_(dir / kLockName) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw CliError("cannot create " + dir.string() + ": " + ec.message(),
                     kExitIo);
    std::FILE *f = std::fopen(path_.c_str(), "wx");
    if (!f)
      throw CliError(dir.string() + " is locked by another run (delete " +
                         path_.string() + " if it is stale)",
                     kExitIo);
    std::fclose(f);
  }
  ~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock &) = delete;
  DirLock &operator=(const DirLock &) = delete;

 private:
  fs::path path_;
};

fs::path CorpusPath(const fs::path &p) {
  return fs::is_directory(p) ? p / kCorpusFile : p;
}

fs::path ParentOrCurrent(const fs::path &file) {
  return file.has_parent_path() ? file.parent_path() : fs::path(".");
}

json Seeds(const RunConfig &c) {
  return json{{"corpus", c.corpus.seed},
              {"train", c.train.seed},
              {"eval", c.eval.trials.seed}};
}

std::string Num17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Options {
  std::string config;
  std::string out;
  std::string stage = "all";
  std::string corpus;
  std::string checkpoint;
  std::string ablate;
  std::string bundle;
  std::string report;
  std::string input;
  std::string output;
};

int GenData(const Options &o, const CliEnvironment &env, std::ostream &out) {
  const RunConfig cfg = LoadRunConfig(o.config, env.seed);
  const Corpus corpus = GenerateCorpus(cfg.corpus);
  const fs::path dir = o.out;
  DirLock lock(dir);
  const std::string text = CorpusToJsonLines(corpus);
  WriteFileBytes(dir / kCorpusFile, text);
  json manifest{{"format_version", kManifestFormatVersion},
                {"command", "gen-data"},
                {"config", RunConfigToJson(cfg)},
                {"config_hash", RunConfigHash(cfg)},
                {"seed", cfg.corpus.seed},
                {"corpus_fingerprint", CorpusFingerprint(corpus)}};
  WriteFileBytes(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << (dir / kCorpusFile).string() << " ("
      << corpus.speakers.size() << " speakers)\n";
  return kExitOk;
}

std::vector<int> ParseStages(const std::string &s) {
  if (s == "all") return {0, 1, 2};
  if (s == "0" || s == "1" || s == "2") return {s[0] - '0'};
  throw ConfigError("--stage must be 0, 1, 2 or all, got '" + s + "'");
}

json WeightsJson(const TrainConfig &t) {
  const Stage1Weights w = t.EffectiveStage1Weights();
  return json{{"ce", w.ce},
              {"kd", w.kd},
              {"alignment", w.alignment},
              {"alignment_kind", w.alignment_kind == AlignmentKind::kContrastive
                                     ? "contrastive"
                                     : "cosine"}};
}

int Train(const Options &o, const CliEnvironment &env, std::ostream &out) {
  RunConfig cfg = LoadRunConfig(o.config, env.seed);
  if (!o.ablate.empty()) cfg.train.ablation = ParseAblation(o.ablate);
  const std::vector<int> stages = ParseStages(o.stage);
  const Corpus corpus = ReadCorpus(CorpusPath(o.corpus));
  const std::string corpus_fp = CorpusFingerprint(corpus);
  const fs::path dir = o.checkpoint;
  DirLock lock(dir);

  ModelBundle bundle;
  json extra = json::object();
  if (stages.front() > 0) {
    if (!fs::exists(dir / "manifest.json"))
      throw StateError("stage " + std::to_string(stages.front()) +
                       " needs the earlier stages' checkpoint in " + dir.string());
    extra = ReadBundleManifest(dir);
    bundle = LoadBundle(dir);
    if (extra.value("corpus_fingerprint", corpus_fp) != corpus_fp)
      throw ConfigError("checkpoint in " + dir.string() +
                        " was trained on a different corpus");
    for (const char *key : {"format_version", "stages", "files", "fingerprint"})
      extra.erase(key);
  }

  std::vector<TrainLogEntry> log;
  std::ofstream log_file(dir / kTrainLog, std::ios::app | std::ios::binary);
  if (!log_file) throw CliError("cannot open " + (dir / kTrainLog).string(), kExitIo);
  for (int stage : stages) {
    log.clear();
    RunStage(stage, corpus, cfg.train, &bundle, &log);
    for (const TrainLogEntry &e : log) log_file << LogEntryToJson(e).dump() << '\n';
    log_file.flush();
    out << "stage " << stage << " done";
    if (!log.empty())
      out << ": total " << log.front().total << " -> " << log.back().total;
    out << '\n';
  }
  if (!log_file) throw CliError("cannot write " + (dir / kTrainLog).string(), kExitIo);

  extra["command"] = "train";
  extra["config"] = RunConfigToJson(cfg);
  extra["config_hash"] = RunConfigHash(cfg);
  extra["seeds"] = Seeds(cfg);
  extra["corpus_fingerprint"] = corpus_fp;
  if (std::find(stages.begin(), stages.end(), 1) != stages.end()) {
    extra["ablation"] = AblationName(cfg.train.ablation);
    extra["effective_weights"] = WeightsJson(cfg.train);
  }
  json run{{"stages", stages},
           {"config_hash", RunConfigHash(cfg)},
           {"ablation", AblationName(cfg.train.ablation)}};
  if (!extra.contains("runs")) extra["runs"] = json::array();
  extra["runs"].push_back(run);
  SaveBundle(dir, bundle, extra);
  out << "saved bundle to " << dir.string() << '\n';
  return kExitOk;
}

int Eval(const Options &o, const CliEnvironment &env, std::ostream &out) {
  const RunConfig cfg = LoadRunConfig(o.config, env.seed);
  const Corpus corpus = ReadCorpus(CorpusPath(o.corpus));
  const ModelBundle bundle = LoadBundle(o.bundle);
  ScoreSet scores;
  std::vector<SweepPoint> det;
  const EvalReport report = EvaluateBundle(corpus, bundle, cfg.eval, &scores, &det);

  const fs::path path = o.report;
  DirLock lock(ParentOrCurrent(path));
  fs::path det_path = path, score_path = path;
  det_path.replace_extension(".det.csv");
  score_path.replace_extension(".scores.txt");
  WriteFileBytes(path, SerializeReport(report));
  WriteFileBytes(det_path, DetCsv(det));
  WriteFileBytes(score_path, ScoreDump(scores));
  out << "eer " << report.eer.eer << "  min_dcf " << report.min_dcf.min_dcf;
  if (report.silhouette) out << "  silhouette " << *report.silhouette;
  if (report.retrieval_top1) out << "  top1 " << *report.retrieval_top1;
  out << '\n';
  return kExitOk;
}

std::string EmbedLine(const ModelBundle &bundle, const json &j) {
  const Modality m = ParseModality(j.at("modality").get<std::string>());
  Embedding e;
  int speaker = -1;
  if (m == Modality::kText) {
    const PromptTokens p = PromptFromJson(j);
    speaker = p.speaker;
    e = EmbedAny(bundle, p);
  } else {
    const Observation obs = ObservationFromJson(j);
    speaker = obs.speaker;
    e = EmbedAny(bundle, obs);
  }
  std::string line(ModalityName(m));
  line += speaker >= 0 ? " " + std::to_string(speaker) : std::string(" -");
  for (double v : e.values) line += " " + Num17(v);
  return line + "\n";
}

int Embed(const Options &o, std::ostream &out) {
  const ModelBundle bundle = LoadBundle(o.bundle);
  std::istringstream in(ReadFileBytes(o.input));
  std::string line, result;
  size_t line_no = 0, records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = o.input + " line " + std::to_string(line_no) + ": ";
    try {
      result += EmbedLine(bundle, json::parse(line));
      ++records;
    } catch (const StateError &e) {
      throw StateError(where + e.what());
    } catch (const json::exception &e) {
      throw CliError(where + e.what(), kExitConfig);
    } catch (const Error &e) {
      throw CliError(where + e.what(), kExitConfig);
    }
  }
  const fs::path path = o.output;
  DirLock lock(ParentOrCurrent(path));
  WriteFileBytes(path, result);
  out << "wrote " << records << " embeddings to " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

CliEnvironment CliEnvironment::FromProcess() {
  CliEnvironment env;
  if (const char *s = std::getenv(kSeedEnvVar)) env.seed = s;
  return env;
}

int RunCli(const std::vector<std::string> &args, const CliEnvironment &env,
           std::ostream &out, std::ostream &err) {
  CLI::App app{"multimodal speaker embedding alignment"};
  app.name("mmspk");
  app.require_subcommand(1);
  Options o;

  CLI::App *gen = app.add_subcommand("gen-data", "generate a synthetic corpus");
  gen->add_option("--config", o.config, "run config (JSON)");
  gen->add_option("--out", o.out, "output directory")->required();

  CLI::App *train = app.add_subcommand("train", "train one stage or all");
  train->add_option("--config", o.config, "run config (JSON)");
  train->add_option("--stage", o.stage, "0, 1, 2 or all")->capture_default_str();
  train->add_option("--corpus", o.corpus, "corpus file or gen-data directory")
      ->required();
  train->add_option("--checkpoint", o.checkpoint, "bundle directory")->required();
  train->add_option("--ablate", o.ablate, "no-ce, no-kd or no-cl");

  CLI::App *eval = app.add_subcommand("eval", "evaluate a bundle");
  eval->add_option("--config", o.config, "run config (JSON)");
  eval->add_option("--bundle", o.bundle, "bundle directory")->required();
  eval->add_option("--corpus", o.corpus, "corpus file or gen-data directory")
      ->required();
  eval->add_option("--report", o.report, "report path (JSON)")->required();

  CLI::App *embed = app.add_subcommand("embed", "embed observations and prompts");
  embed->add_option("--bundle", o.bundle, "bundle directory")->required();
  embed->add_option("--input", o.input, "JSONL requests")->required();
  embed->add_option("--output", o.output, "output path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return GenData(o, env, out);
    if (train->parsed()) return Train(o, env, out);
    if (eval->parsed()) return Eval(o, env, out);
    return Embed(o, out);
  } catch (const CliError &e) {
    err << "mmspk: " << e.what() << '\n';
    return e.code();
  } catch (const ConfigError &e) {
    err << "mmspk: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StateError &e) {
    err << "mmspk: missing prerequisite: " << e.what() << '\n';
    return kExitMissingPrerequisite;
  } catch (const TrainingError &e) {
    err << "mmspk: training diverged in stage " << e.stage() << " at step "
        << e.step() << ": " << e.what() << '\n';
    return kExitDivergence;
  } catch (const FormatError &e) {
    err << "mmspk: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    err << "mmspk: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace mmspk
