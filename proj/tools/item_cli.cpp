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

// item-cli: command-line front end over the C API.
//
//   item-cli gen-corpus --out DIR [--games N --sentences N --seed S]
//   item-cli train --corpus FILE --out DIR
//   item-cli decode --model FILE --corpus FILE --out DIR [--oracle]
//   item-cli baseline --baseline b3 --corpus FILE --out DIR
//   item-cli eval (--model FILE | --baseline KIND) --corpus FILE --out DIR
//   item-cli leave-one-out --corpus FILE --out DIR
//   item-cli convert --corpus GAME.tsv ... --out DIR
//
// A JSON file given with --config supplies defaults; flags override it.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "item/item.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Flags {
  std::string config;
  std::string domain;
  std::vector<std::string> corpus;
  std::string aliases;
  std::string model;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> penalty;
  std::optional<std::size_t> beam_width;
  std::optional<std::size_t> samples;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::string baseline;
  bool exact_match = false;
  bool type_only = false;
  bool oracle = false;
  std::optional<std::size_t> games;
  std::optional<std::size_t> sentences;
  bool serial = false;
};

int ReportError(const std::string& code, const std::string& message,
                int exit_code) {
  json err;
  err["error"] = code;
  err["message"] = message;
  std::cerr << err.dump() << '\n';
  return exit_code;
}

void AddFlags(CLI::App* cmd, Flags* f) {
  cmd->add_option("--config", f->config, "JSON configuration file");
  cmd->add_option("--domain", f->domain, "Domain file (default: bundled)");
  cmd->add_option("--corpus", f->corpus, "Corpus file(s)");
  cmd->add_option("--aliases", f->aliases, "Player alias file");
  cmd->add_option("--model", f->model, "Model file");
  cmd->add_option("--out", f->out, "Output directory");
  cmd->add_option("--seed", f->seed, "Global seed");
  cmd->add_option("--penalty", f->penalty, "Infeasibility penalty in [-1, 0]");
  cmd->add_option("--beam-width", f->beam_width, "Hypotheses kept per cell");
  cmd->add_option("--samples-per-sentence", f->samples,
                  "Sampled event types per sentence");
  cmd->add_option("--epsilon", f->epsilon, "Convergence threshold");
  cmd->add_option("--max-iters", f->max_iters, "Maximum outer iterations");
  cmd->add_option("--baseline", f->baseline, "b0, b1a, b1b, b2a, b2b or b3");
  auto* exact = cmd->add_flag("--exact-match", f->exact_match,
                              "Headline metric matches type and arguments");
  auto* type = cmd->add_flag("--type-only", f->type_only,
                             "Headline metric matches the type only");
  exact->excludes(type);
  cmd->add_flag("--oracle", f->oracle, "Also run the exhaustive decoder");
  cmd->add_option("--games", f->games, "Synthetic games to generate");
  cmd->add_option("--sentences", f->sentences, "Sentences per synthetic game");
  cmd->add_flag("--serial", f->serial, "Disable parallel folds");
}

json LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("FILE_NOT_FOUND:config file not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    json doc = json::parse(buf.str());
    if (!doc.is_object()) {
      throw std::runtime_error("INVALID_CONFIG:" + path +
                               ": expected an object");
    }
    return doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("PARSE_ERROR:" + path + ": " + e.what());
  }
}

json BuildConfig(const Flags& f) {
  json doc = f.config.empty() ? json::object() : LoadConfigFile(f.config);
  if (!f.domain.empty()) doc["domain"] = f.domain;
  if (!f.corpus.empty()) doc["corpus"] = f.corpus;
  if (!f.aliases.empty()) doc["aliases"] = f.aliases;
  if (!f.model.empty()) doc["model"] = f.model;
  if (!f.out.empty()) doc["out"] = f.out;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.penalty) doc["penalty"]["r_infeasible"] = *f.penalty;
  if (f.beam_width) doc["penalty"]["beam_width"] = *f.beam_width;
  if (f.samples) doc["train"]["n_samples_per_sentence"] = *f.samples;
  if (f.epsilon) doc["train"]["epsilon"] = *f.epsilon;
  if (f.max_iters) doc["train"]["max_outer_iterations"] = *f.max_iters;
  if (!f.baseline.empty()) doc["baseline"] = f.baseline;
  if (f.exact_match) doc["exact_match"] = true;
  if (f.type_only) doc["exact_match"] = false;
  if (f.oracle) doc["oracle"] = true;
  if (f.games) doc["n_games"] = *f.games;
  if (f.sentences) doc["simulator"]["n_sentences"] = *f.sentences;
  if (f.serial) doc["parallel"] = false;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maps narrative sentences to events of a planning domain"};
  app.require_subcommand(1);
  Flags flags;
  const char* commands[][2] = {
      {"gen-corpus", "Write a synthetic gold-annotated corpus"},
      {"train", "Learn a model from training narratives"},
      {"decode", "Decode narratives with a trained model"},
      {"baseline", "Run a baseline predictor"},
      {"eval", "Score a model or baseline against gold events"},
      {"leave-one-out", "Leave-one-game-out report for all approaches"},
      {"convert", "Convert text<TAB>meaning files into a corpus"},
  };
  for (const auto& c : commands)
    AddFlags(app.add_subcommand(c[0], c[1]), &flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("INVALID_ARGUMENT", e.what(), 2);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json config;
  try {
    config = BuildConfig(flags);
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    const std::size_t colon = what.find(':');
    return ReportError(what.substr(0, colon), what.substr(colon + 1), 1);
  }

  char* summary = nullptr;
  const item_status status =
      item_run(command.c_str(), config.dump().c_str(), &summary);
  if (status != ITEM_OK) {
    return ReportError(item_status_name(status), item_last_error_message(), 1);
  }
  std::cout << summary << '\n';
  item_string_free(summary);
  return 0;
}
