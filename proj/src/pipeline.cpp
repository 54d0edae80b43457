// Copyright 2026 The ITEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "item/pipeline.hpp"

#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <utility>

#include "config_json.hpp"
#include "item/corpus.hpp"
#include "item/domain_io.hpp"
#include "item/error.hpp"
#include "item/random.hpp"

namespace item {
namespace {

namespace fs = std::filesystem;
using internal::json;
using internal::ordered_json;

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::kGenCorpus, "gen-corpus"},
    {Command::kTrain, "train"},
    {Command::kDecode, "decode"},
    {Command::kBaseline, "baseline"},
    {Command::kEval, "eval"},
    {Command::kLeaveOneOut, "leave-one-out"},
    {Command::kConvert, "convert"},
};

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

void WriteAtomic(const fs::path& path,
                 const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    }
    body(out);
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot rename onto " + path.string());
  }
}

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorCode::kIoError, "cannot create output directory " + dir);
    }
  }

  void Write(const std::string& name,
             const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    WriteAtomic(path, body);
    written_.push_back(path.string());
  }

  std::vector<std::string> Take() { return std::move(written_); }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

struct Inputs {
  Domain domain;
  AliasTable aliases;
  std::vector<Narrative> narratives;
};

Domain LoadConfiguredDomain(const RunConfig& config) {
  return config.domain_path.empty() ? DefaultDomain()
                                    : LoadDomain(config.domain_path);
}

Inputs LoadInputs(const RunConfig& config) {
  Inputs in{LoadConfiguredDomain(config), {}, {}};
  if (!config.aliases_path.empty()) {
    in.aliases = AliasTable::Load(config.aliases_path);
  }
  const AliasTable* aliases = in.aliases.empty() ? nullptr : &in.aliases;
  for (const std::string& path : config.corpus_paths) {
    std::vector<Narrative> part = LoadCorpus(path, in.domain, aliases);
    for (Narrative& n : part) in.narratives.push_back(std::move(n));
  }
  if (in.narratives.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus has no narratives");
  }
  return in;
}

bool AllGold(const std::vector<Narrative>& narratives) {
  for (const Narrative& n : narratives) {
    for (const Sentence& s : n.sentences) {
      if (!s.gold) return false;
    }
  }
  return true;
}

Model LoadModelFile(const std::string& path, const Domain& domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kModelNotFound, "cannot open model file " + path);
  }
  return ReadModel(in, domain, path);
}

BaselineOptions BaselineOptionsFor(const RunConfig& config) {
  BaselineOptions options;
  options.edit_distance_threshold = config.train.edit_distance_threshold;
  options.max_edit_ratio = config.train.max_edit_ratio;
  options.compound_tokens = config.train.compound_tokens;
  options.penalty = config.penalty;
  return options;
}

std::vector<GroundEvent> RunBaseline(BaselineKind kind,
                                     const Narrative& narrative,
                                     const Domain& domain,
                                     const RunConfig& config) {
  Rng rng(DeriveSeed(
      config.seed,
      "baseline/" + std::string(BaselineName(kind)) + "/" + narrative.id));
  return Baseline(kind, narrative, domain, rng, BaselineOptionsFor(config));
}

TrainConfig TrainConfigFor(const RunConfig& config, const std::string& label) {
  TrainConfig train = config.train;
  train.seed = DeriveSeed(config.seed, label);
  return train;
}

ordered_json AccuracyJson(const EvalReport& exact, const EvalReport& type) {
  ordered_json j;
  j["exact"] = exact.micro_average;
  j["type"] = type.micro_average;
  j["n_sentences"] = exact.n_sentences;
  return j;
}

ordered_json ArtifactsJson(const std::vector<std::string>& artifacts) {
  ordered_json j = ordered_json::array();
  for (const std::string& a : artifacts) j.push_back(a);
  return j;
}

void WriteLabelCurve(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::vector<IterationRecord>>>&
        logs) {
  out << "game,iteration,label_f1,theta_delta\n";
  for (const auto& [game, log] : logs) {
    for (const IterationRecord& r : log) {
      out << game << ',' << r.k << ','
          << (r.label_f1 ? FormatFixed(*r.label_f1) : "") << ','
          << FormatFixed(r.delta) << '\n';
    }
  }
}

void WritePredictions(std::ostream& out, const Domain& domain,
                      const Narrative& narrative,
                      const std::vector<GroundEvent>& events) {
  for (std::size_t t = 0; t < events.size(); ++t) {
    ordered_json rec;
    rec["game"] = narrative.id;
    rec["idx"] = narrative.sentences[t].index;
    rec["event"] = domain.schema(events[t].type).name;
    ordered_json args = ordered_json::array();
    for (ConstantId c : events[t].args) {
      args.push_back(domain.constants()[c].name);
    }
    rec["args"] = std::move(args);
    out << rec.dump() << '\n';
  }
}

std::vector<NarrativeResult> Results(
    const std::vector<Narrative>& narratives,
    const std::vector<std::vector<GroundEvent>>& predicted) {
  std::vector<NarrativeResult> out;
  for (std::size_t i = 0; i < narratives.size(); ++i) {
    out.push_back(
        {narratives[i].id, predicted[i], GoldSequence(narratives[i])});
  }
  return out;
}

RunSummary GenCorpus(const RunConfig& config) {
  const Domain domain = LoadConfiguredDomain(config);
  SimulatorConfig sim = config.simulator;
  sim.seed = DeriveSeed(config.seed, "corpus");
  std::vector<Narrative> narratives;
  for (SyntheticGame& g : GenerateGames(domain, sim, config.n_games)) {
    narratives.push_back(std::move(g.narrative));
  }
  Outputs outputs(config.out_dir);
  outputs.Write("corpus.jsonl", [&](std::ostream& out) {
    WriteCorpus(out, narratives, domain);
  });
  std::size_t n = 0;
  for (const Narrative& nar : narratives) n += nar.size();
  ordered_json j;
  j["command"] = "gen-corpus";
  j["n_games"] = narratives.size();
  j["n_sentences"] = n;
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

RunSummary Convert(const RunConfig& config) {
  const Domain domain = LoadConfiguredDomain(config);
  AliasTable aliases;
  if (!config.aliases_path.empty()) {
    aliases = AliasTable::Load(config.aliases_path);
  }
  std::vector<Narrative> narratives;
  for (const std::string& path : config.corpus_paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path);
    narratives.push_back(ConvertTsv(in, fs::path(path).stem().string(), domain,
                                    aliases.empty() ? nullptr : &aliases));
  }
  Outputs outputs(config.out_dir);
  outputs.Write("corpus.jsonl", [&](std::ostream& out) {
    WriteCorpus(out, narratives, domain);
  });
  ordered_json j;
  j["command"] = "convert";
  j["n_games"] = narratives.size();
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

RunSummary Train(const RunConfig& config) {
  const Inputs in = LoadInputs(config);
  const Model model =
      IterTrain(in.narratives, in.domain, TrainConfigFor(config, "train"));
  Outputs outputs(config.out_dir);
  outputs.Write("model.json",
                [&](std::ostream& out) { WriteModel(out, model); });
  outputs.Write("training_curve.csv",
                [&](std::ostream& out) { WriteTrainingCurve(out, model); });
  ordered_json j;
  j["command"] = "train";
  j["dim"] = model.space.dim();
  j["iterations"] = model.iterations_run;
  j["converged"] = model.converged;
  j["final_delta"] = model.final_delta;
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

RunSummary Decode(const RunConfig& config) {
  const Inputs in = LoadInputs(config);
  const Model model = LoadModelFile(config.model_path, in.domain);
  std::vector<DecodeResult> results;
  std::vector<std::optional<double>> oracle;
  double total = 0.0;
  std::size_t oracle_skipped = 0;
  for (const Narrative& n : in.narratives) {
    results.push_back(Viterbi(n, model, in.domain, config.penalty));
    total += results.back().utility;
    oracle.emplace_back();
    if (!config.oracle) continue;
    try {
      oracle.back() =
          ExhaustiveDecode(n, model, in.domain, config.penalty).utility;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooLarge) throw;
      ++oracle_skipped;
    }
  }
  Outputs outputs(config.out_dir);
  outputs.Write("decode.jsonl", [&](std::ostream& out) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      WriteDecode(out, in.domain, in.narratives[i], results[i], oracle[i]);
    }
  });
  ordered_json j;
  j["command"] = "decode";
  j["n_narratives"] = in.narratives.size();
  j["total_utility"] = total;
  if (config.oracle) j["oracle_skipped"] = oracle_skipped;
  if (AllGold(in.narratives)) {
    std::vector<std::vector<GroundEvent>> predicted;
    for (const DecodeResult& r : results) predicted.push_back(r.events);
    const auto rs = Results(in.narratives, predicted);
    j["accuracy"] =
        AccuracyJson(MicroAverage(rs, true), MicroAverage(rs, false));
  }
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

RunSummary BaselineCommand(const RunConfig& config) {
  const Inputs in = LoadInputs(config);
  const BaselineKind kind = *config.baseline;
  std::vector<std::vector<GroundEvent>> predicted;
  for (const Narrative& n : in.narratives) {
    predicted.push_back(RunBaseline(kind, n, in.domain, config));
  }
  Outputs outputs(config.out_dir);
  outputs.Write("baseline_" + std::string(BaselineName(kind)) + ".jsonl",
                [&](std::ostream& out) {
                  for (std::size_t i = 0; i < predicted.size(); ++i) {
                    WritePredictions(out, in.domain, in.narratives[i],
                                     predicted[i]);
                  }
                });
  ordered_json j;
  j["command"] = "baseline";
  j["baseline"] = BaselineName(kind);
  if (AllGold(in.narratives)) {
    const auto rs = Results(in.narratives, predicted);
    j["accuracy"] =
        AccuracyJson(MicroAverage(rs, true), MicroAverage(rs, false));
  }
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

void WriteTable(Outputs& outputs, const std::string& stem,
                const ReportTable& table) {
  outputs.Write(stem + ".csv",
                [&](std::ostream& out) { WriteReportCsv(out, table); });
  outputs.Write(stem + ".json",
                [&](std::ostream& out) { WriteReportJson(out, table); });
}

ordered_json RowsJson(const ReportTable& table, bool exact_match) {
  ordered_json rows;
  for (const ReportRow& r : table.rows) {
    rows[r.approach] = (exact_match ? r.exact : r.type_only).micro_average;
  }
  return rows;
}

RunSummary Eval(const RunConfig& config) {
  const Inputs in = LoadInputs(config);
  std::vector<std::vector<GroundEvent>> predicted;
  std::string approach;
  if (config.baseline) {
    approach = std::string(BaselineLabel(*config.baseline));
    for (const Narrative& n : in.narratives) {
      predicted.push_back(RunBaseline(*config.baseline, n, in.domain, config));
    }
  } else {
    approach = "ITEM";
    const Model model = LoadModelFile(config.model_path, in.domain);
    for (const Narrative& n : in.narratives) {
      predicted.push_back(Viterbi(n, model, in.domain, config.penalty).events);
    }
  }
  ReportTable table;
  for (const Narrative& n : in.narratives) table.games.push_back(n.id);
  table.rows.push_back(MakeRow(approach, Results(in.narratives, predicted)));
  Outputs outputs(config.out_dir);
  WriteTable(outputs, "eval", table);
  ordered_json j;
  j["command"] = "eval";
  j["metric"] = config.exact_match ? "exact" : "type";
  j["accuracy"] = RowsJson(table, config.exact_match);
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

RunSummary LeaveOneOutCommand(const RunConfig& config) {
  const Inputs in = LoadInputs(config);
  const LeaveOneOutResult result =
      LeaveOneOut(in.narratives, in.domain, config);
  Outputs outputs(config.out_dir);
  WriteTable(outputs, "report", result.table);
  outputs.Write("label_curve.csv",
                [&](std::ostream& out) { WriteLabelCurve(out, result.logs); });
  ordered_json j;
  j["command"] = "leave-one-out";
  j["metric"] = config.exact_match ? "exact" : "type";
  j["accuracy"] = RowsJson(result.table, config.exact_match);
  RunSummary summary{outputs.Take(), {}};
  j["artifacts"] = ArtifactsJson(summary.artifacts);
  summary.json = j.dump();
  return summary;
}

void CheckFile(const std::string& path, ErrorCode code,
               const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(code, what + " not found: " + path);
  }
}

}  // namespace

Command ParseCommand(std::string_view name) {
  for (const auto& [command, text] : kCommands) {
    if (text == name) return command;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown command '" + std::string(name) + "'");
}

std::string_view CommandName(Command command) {
  for (const auto& [c, text] : kCommands) {
    if (c == command) return text;
  }
  return "unknown";
}

void RunConfig::Validate() const {
  const bool needs_corpus = command != Command::kGenCorpus;
  if (out_dir.empty()) Invalid("an output directory is required");
  if (!domain_path.empty())
    CheckFile(domain_path, ErrorCode::kFileNotFound, "domain file");
  if (!aliases_path.empty())
    CheckFile(aliases_path, ErrorCode::kFileNotFound, "alias file");
  if (needs_corpus && corpus_paths.empty()) {
    Invalid(std::string(CommandName(command)) + " requires a corpus");
  }
  for (const std::string& p : corpus_paths) {
    CheckFile(p, ErrorCode::kFileNotFound, "corpus file");
  }
  const bool needs_model =
      command == Command::kDecode || (command == Command::kEval && !baseline);
  if (needs_model) {
    if (model_path.empty()) Invalid("a model file is required");
    CheckFile(model_path, ErrorCode::kModelNotFound, "model file");
  }
  if (command == Command::kBaseline && !baseline) {
    Invalid("baseline requires a baseline kind");
  }
  if (command == Command::kGenCorpus && n_games == 0) {
    Invalid("n_games must be > 0");
  }
  train.Validate();
  penalty.Validate();
}

void ApplyConfigJson(std::string_view text, RunConfig* config,
                     std::string_view source) {
  const std::string where(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, where + ": " + e.what());
  }
  if (!doc.is_object()) Invalid(where + ": expected an object");
  auto str = [&](const json& v, const std::string& key) {
    if (!v.is_string()) Invalid(where + "." + key + ": expected a string");
    return v.get<std::string>();
  };
  auto boolean = [&](const json& v, const std::string& key) {
    if (!v.is_boolean()) Invalid(where + "." + key + ": expected a boolean");
    return v.get<bool>();
  };
  auto count = [&](const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) {
      Invalid(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "domain") {
      config->domain_path = str(value, key);
    } else if (key == "corpus") {
      config->corpus_paths.clear();
      if (value.is_array()) {
        for (const json& p : value) config->corpus_paths.push_back(str(p, key));
      } else {
        config->corpus_paths.push_back(str(value, key));
      }
    } else if (key == "aliases") {
      config->aliases_path = str(value, key);
    } else if (key == "model") {
      config->model_path = str(value, key);
    } else if (key == "out") {
      config->out_dir = str(value, key);
    } else if (key == "seed") {
      config->seed = count(value, key);
    } else if (key == "baseline") {
      if (value.is_null()) {
        config->baseline.reset();
      } else {
        try {
          config->baseline = ParseBaseline(str(value, key));
        } catch (const Error& e) {
          Invalid(where + ".baseline: " + e.what());
        }
      }
    } else if (key == "exact_match") {
      config->exact_match = boolean(value, key);
    } else if (key == "oracle") {
      config->oracle = boolean(value, key);
    } else if (key == "parallel") {
      config->parallel = boolean(value, key);
    } else if (key == "n_games") {
      config->n_games = count(value, key);
    } else if (key == "train") {
      internal::Apply(value, &config->train, where + ".train");
    } else if (key == "penalty") {
      internal::Apply(value, &config->penalty, where + ".penalty");
    } else if (key == "simulator") {
      internal::Apply(value, &config->simulator, where + ".simulator");
    } else {
      Invalid(where + ": unknown key '" + key + "'");
    }
  }
}

std::string ConfigToJson(const RunConfig& config) {
  ordered_json j;
  j["command"] = CommandName(config.command);
  j["domain"] = config.domain_path;
  j["corpus"] = config.corpus_paths;
  j["aliases"] = config.aliases_path;
  j["model"] = config.model_path;
  j["out"] = config.out_dir;
  j["seed"] = config.seed;
  j["baseline"] = config.baseline ? ordered_json(BaselineName(*config.baseline))
                                  : ordered_json(nullptr);
  j["exact_match"] = config.exact_match;
  j["oracle"] = config.oracle;
  j["n_games"] = config.n_games;
  j["parallel"] = config.parallel;
  j["train"] = internal::ToJson(config.train);
  j["penalty"] = internal::ToJson(config.penalty);
  j["simulator"] = internal::ToJson(config.simulator);
  return j.dump();
}

LeaveOneOutResult LeaveOneOut(const std::vector<Narrative>& narratives,
                              const Domain& domain, const RunConfig& config) {
  if (narratives.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "leave-one-out needs at least two narratives");
  }
  const std::size_t n = narratives.size();
  std::vector<std::vector<GroundEvent>> item(n);
  std::vector<std::vector<IterationRecord>> logs(n);
  std::vector<std::exception_ptr> errors(n);
  auto fold = [&](std::size_t held) {
    try {
      std::vector<Narrative> train;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != held) train.push_back(narratives[i]);
      }
      const Model model = IterTrain(
          train, domain,
          TrainConfigFor(config, "leave-one-out/" + narratives[held].id));
      item[held] =
          Viterbi(narratives[held], model, domain, config.penalty).events;
      logs[held] = model.log;
    } catch (...) {
      errors[held] = std::current_exception();
    }
  };
  if (config.parallel) {
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < n; ++i) workers.emplace_back(fold, i);
    for (std::thread& w : workers) w.join();
  } else {
    for (std::size_t i = 0; i < n; ++i) fold(i);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  LeaveOneOutResult result;
  for (const Narrative& nar : narratives) result.table.games.push_back(nar.id);
  result.table.rows.push_back(MakeRow("ITEM", Results(narratives, item)));
  for (BaselineKind kind : kAllBaselines) {
    std::vector<std::vector<GroundEvent>> predicted;
    for (const Narrative& nar : narratives) {
      predicted.push_back(RunBaseline(kind, nar, domain, config));
    }
    result.table.rows.push_back(MakeRow(std::string(BaselineLabel(kind)),
                                        Results(narratives, predicted)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    result.logs.emplace_back(narratives[i].id, std::move(logs[i]));
  }
  return result;
}

RunSummary Run(const RunConfig& config) {
  config.Validate();
  switch (config.command) {
    case Command::kGenCorpus:
      return GenCorpus(config);
    case Command::kTrain:
      return Train(config);
    case Command::kDecode:
      return Decode(config);
    case Command::kBaseline:
      return BaselineCommand(config);
    case Command::kEval:
      return Eval(config);
    case Command::kLeaveOneOut:
      return LeaveOneOutCommand(config);
    case Command::kConvert:
      return Convert(config);
  }
  throw Error(ErrorCode::kInternal, "unhandled command");
}

}  // namespace item
