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

#ifndef ITEM_PIPELINE_HPP_
#define ITEM_PIPELINE_HPP_

// Batch commands tying corpora, training, decoding, baselines and
// evaluation together. Every artifact is a function of the configuration,
// the seed and the input files.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "item/decode.hpp"
#include "item/eval.hpp"
#include "item/learn.hpp"
#include "item/simulator.hpp"

namespace item {

enum class Command {
  kGenCorpus,
  kTrain,
  kDecode,
  kBaseline,
  kEval,
  kLeaveOneOut,
  kConvert,
};

// "gen-corpus", "train", "decode", "baseline", "eval", "leave-one-out",
// "convert". Throws kInvalidArgument.
Command ParseCommand(std::string_view name);
std::string_view CommandName(Command command);

struct RunConfig {
  Command command = Command::kTrain;
  std::string domain_path;  // empty: the bundled soccer domain
  std::vector<std::string> corpus_paths;
  std::string aliases_path;
  std::string model_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  TrainConfig train;
  PenaltyConfig penalty;
  std::optional<BaselineKind> baseline;
  bool exact_match = true;
  bool oracle = false;
  SimulatorConfig simulator = DefaultSimulatorConfig();
  std::size_t n_games = 4;
  bool parallel = true;

  // Checks the fields the command needs and that the referenced files
  // exist. Throws kInvalidConfig, kFileNotFound or kModelNotFound.
  void Validate() const;
};

// Overlays a JSON configuration document:
//   {"domain", "corpus": str | [str], "aliases", "model", "out", "seed",
//    "baseline", "exact_match", "oracle", "n_games", "parallel",
//    "train": {...}, "penalty": {...}, "simulator": {...}}
// Unknown keys throw kInvalidConfig.
void ApplyConfigJson(std::string_view text, RunConfig* config,
                     std::string_view source = "config");

// One-line JSON rendering of the effective configuration.
std::string ConfigToJson(const RunConfig& config);

struct RunSummary {
  std::vector<std::string> artifacts;
  // Compact JSON object with the command's headline numbers.
  std::string json;
};

// Validates and executes the configured command. Outputs are written
// atomically under config.out_dir only.
RunSummary Run(const RunConfig& config);

// Leave-one-game-out evaluation of the learner and every baseline, the
// table behind the "report" artifacts. Narratives must carry gold events.
struct LeaveOneOutResult {
  ReportTable table;
  // Per held-out game: the training log of the model used for it.
  std::vector<std::pair<std::string, std::vector<IterationRecord>>> logs;
};
LeaveOneOutResult LeaveOneOut(const std::vector<Narrative>& narratives,
                              const Domain& domain, const RunConfig& config);

}  // namespace item

#endif  // ITEM_PIPELINE_HPP_
