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

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "item/error.hpp"
#include "item/pipeline.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace item {
namespace {

namespace fs = std::filesystem;
using testing::FreshDir;
using testing::Slurp;

ErrorCode CodeOf(const RunConfig& c) {
  try {
    Run(c);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

std::set<std::string> Listing(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out.insert(e.path().filename().string());
  }
  return out;
}

RunConfig Small(const fs::path& root, Command command, const std::string& out) {
  RunConfig c;
  c.command = command;
  c.out_dir = (root / out).string();
  c.seed = 4;
  c.simulator.n_sentences = 25;
  c.n_games = 3;
  c.train.n_samples_per_sentence = 4;
  c.train.max_outer_iterations = 4;
  if (command != Command::kGenCorpus) {
    c.corpus_paths = {(root / "corpus" / "corpus.jsonl").string()};
  }
  return c;
}

TEST_CASE("commands") {
  CHECK(ParseCommand("leave-one-out") == Command::kLeaveOneOut);
  CHECK(CommandName(Command::kGenCorpus) == "gen-corpus");
  CHECK_THROWS_AS(ParseCommand("serve"), Error);
}

TEST_CASE("config overlay") {
  RunConfig c;
  ApplyConfigJson(R"({"corpus": "a.jsonl", "seed": 9, "baseline": "b3",
                      "train": {"epsilon": 0.5, "stratified_balance": false},
                      "penalty": {"r_infeasible": -0.25},
                      "simulator": {"n_sentences": 12}})",
                  &c);
  CHECK(c.corpus_paths == std::vector<std::string>{"a.jsonl"});
  CHECK(c.seed == 9);
  CHECK(c.baseline == BaselineKind::kB3);
  CHECK(c.train.epsilon == 0.5);
  CHECK_FALSE(c.train.stratified_balance);
  CHECK(c.penalty.r_infeasible == -0.25);
  CHECK(c.simulator.n_sentences == 12);
  ApplyConfigJson(R"({"corpus": ["x", "y"]})", &c);
  CHECK(c.corpus_paths.size() == 2);

  auto code = [](const std::string& text) {
    RunConfig r;
    try {
      ApplyConfigJson(text, &r);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  CHECK(code(R"({"colour": 1})") == ErrorCode::kInvalidConfig);
  CHECK(code(R"({"train": {"epsilon": "small"}})") ==
        ErrorCode::kInvalidConfig);
  CHECK(code(R"({"train": {"max_outer_iterations": -1}})") ==
        ErrorCode::kInvalidConfig);
  CHECK(code(R"({"seed": -3})") == ErrorCode::kInvalidConfig);
  CHECK(code(R"({"baseline": "b7"})") == ErrorCode::kInvalidConfig);
  CHECK(code("{") == ErrorCode::kParseError);

  const auto echoed = nlohmann::json::parse(ConfigToJson(c));
  CHECK(echoed["train"]["epsilon"] == 0.5);
}

TEST_CASE("validation") {
  const fs::path root = FreshDir("validation");
  RunConfig c = Small(root, Command::kDecode, "d");
  c.model_path = (root / "missing.json").string();
  c.corpus_paths.clear();
  CHECK(CodeOf(c) == ErrorCode::kInvalidConfig);
  c.corpus_paths = {(root / "missing.jsonl").string()};
  CHECK(CodeOf(c) == ErrorCode::kFileNotFound);
  {
    std::ofstream(root / "c.jsonl") << "";
  }
  c.corpus_paths = {(root / "c.jsonl").string()};
  CHECK(CodeOf(c) == ErrorCode::kModelNotFound);
  c.out_dir.clear();
  CHECK(CodeOf(c) == ErrorCode::kInvalidConfig);
  RunConfig b = Small(root, Command::kBaseline, "b");
  b.corpus_paths = {(root / "c.jsonl").string()};
  CHECK(CodeOf(b) == ErrorCode::kInvalidConfig);
  b.baseline = BaselineKind::kB0;
  CHECK(CodeOf(b) == ErrorCode::kEmptyCorpus);
}

TEST_CASE("end to end") {
  const fs::path root = FreshDir("pipeline");
  const RunSummary gen = Run(Small(root, Command::kGenCorpus, "corpus"));
  CHECK(Listing(root / "corpus") == std::set<std::string>{"corpus.jsonl"});
  CHECK(nlohmann::json::parse(gen.json)["n_sentences"] == 75);

  const RunSummary train = Run(Small(root, Command::kTrain, "model"));
  CHECK(Listing(root / "model") ==
        std::set<std::string>{"model.json", "training_curve.csv"});
  const std::string model_text = Slurp(root / "model" / "model.json");
  Run(Small(root, Command::kTrain, "model2"));
  CHECK(Slurp(root / "model2" / "model.json") == model_text);

  RunConfig dec = Small(root, Command::kDecode, "decode");
  dec.model_path = (root / "model" / "model.json").string();
  dec.oracle = true;
  const auto dj = nlohmann::json::parse(Run(dec).json);
  CHECK(dj["n_narratives"] == 3);
  CHECK(dj.contains("accuracy"));
  CHECK(Listing(root / "decode") == std::set<std::string>{"decode.jsonl"});

  RunConfig base = Small(root, Command::kBaseline, "base");
  base.baseline = BaselineKind::kB1a;
  Run(base);
  CHECK(Listing(root / "base") == std::set<std::string>{"baseline_b1a.jsonl"});

  RunConfig ev = Small(root, Command::kEval, "eval");
  ev.model_path = dec.model_path;
  ev.exact_match = false;
  const auto ej = nlohmann::json::parse(Run(ev).json);
  CHECK(ej["metric"] == "type");
  CHECK(ej["accuracy"].contains("ITEM"));
  CHECK(Listing(root / "eval") ==
        std::set<std::string>{"eval.csv", "eval.json"});

  RunConfig loo = Small(root, Command::kLeaveOneOut, "loo");
  const RunSummary s1 = Run(loo);
  CHECK(Listing(root / "loo") ==
        std::set<std::string>{"label_curve.csv", "report.csv", "report.json"});
  const auto report =
      nlohmann::json::parse(Slurp(root / "loo" / "report.json"));
  CHECK(report["games"].size() == 3);
  CHECK(report["rows"].size() == 7);
  loo.out_dir = (root / "loo2").string();
  loo.parallel = false;
  Run(loo);
  for (const char* f : {"report.csv", "report.json", "label_curve.csv"}) {
    CHECK(Slurp(root / "loo" / f) == Slurp(root / "loo2" / f));
  }
  // Inputs are untouched and nothing is written beside the output folders.
  CHECK(Listing(root) == std::set<std::string>{"base", "corpus", "decode",
                                               "eval", "loo", "loo2", "model",
                                               "model2"});
}

TEST_CASE("convert") {
  const fs::path root = FreshDir("convert");
  std::ofstream(root / "2001.tsv")
      << "Pink3 passes to Pink4.\tpass(Pink3,Pink4)\n"
         "Pink4 kicks.\tkick(Pink4)\n";
  RunConfig c;
  c.command = Command::kConvert;
  c.corpus_paths = {(root / "2001.tsv").string()};
  c.out_dir = (root / "out").string();
  Run(c);
  const std::string text = Slurp(root / "out" / "corpus.jsonl");
  CHECK(text.find("\"game\":\"2001\"") != std::string::npos);
}

}  // namespace
}  // namespace item
