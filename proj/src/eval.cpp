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

#include "item/eval.hpp"

#include <cstdio>
#include <ostream>

#include "item/error.hpp"
#include "json.hpp"

namespace item {

double Accuracy(std::span<const GroundEvent> predicted,
                std::span<const GroundEvent> gold, bool exact_match) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "predicted length " + std::to_string(predicted.size()) +
                    " != gold length " + std::to_string(gold.size()));
  }
  if (gold.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    correct += exact_match ? predicted[i] == gold[i]
                           : predicted[i].type == gold[i].type;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

EvalReport MicroAverage(std::span<const NarrativeResult> results,
                        bool exact_match) {
  if (results.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no narratives to average");
  }
  EvalReport report;
  report.exact_match = exact_match;
  for (const NarrativeResult& r : results) {
    const double acc = Accuracy(r.predicted, r.gold, exact_match);
    report.per_game.emplace_back(r.game, acc);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < r.gold.size(); ++i) {
      correct += exact_match ? r.predicted[i] == r.gold[i]
                             : r.predicted[i].type == r.gold[i].type;
    }
    report.n_correct += correct;
    report.n_sentences += r.gold.size();
  }
  report.micro_average = report.n_sentences == 0
                             ? 0.0
                             : static_cast<double>(report.n_correct) /
                                   static_cast<double>(report.n_sentences);
  return report;
}

std::vector<GroundEvent> GoldSequence(const Narrative& narrative) {
  std::vector<GroundEvent> out;
  for (const Sentence& s : narrative.sentences) {
    if (!s.gold) {
      throw Error(ErrorCode::kInvalidArgument,
                  "game '" + narrative.id + "' sentence " +
                      std::to_string(s.index) + " has no gold event");
    }
    out.push_back(*s.gold);
  }
  return out;
}

double F1(double precision, double recall) {
  if (precision + recall <= 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double LabelF1(std::span<const TrainingExample> examples,
               std::span<const std::uint8_t> labels,
               std::span<const Narrative> narratives) {
  if (labels.size() != examples.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "label count differs from example count");
  }
  std::size_t positives = 0;
  std::size_t true_positives = 0;
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const TrainingExample& ex = examples[i];
    const auto& gold = narratives[ex.narrative].sentences[ex.sentence].gold;
    if (!gold) continue;
    const bool correct = ex.event == *gold;
    relevant += correct;
    if (labels[i]) {
      ++positives;
      true_positives += correct;
    }
  }
  if (positives == 0 || relevant == 0) return 0.0;
  return F1(static_cast<double>(true_positives) / positives,
            static_cast<double>(true_positives) / relevant);
}

ReportRow MakeRow(std::string approach,
                  std::span<const NarrativeResult> results) {
  ReportRow row;
  row.approach = std::move(approach);
  row.exact = MicroAverage(results, true);
  row.type_only = MicroAverage(results, false);
  return row;
}

std::string FormatFixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

void WriteReportCsv(std::ostream& out, const ReportTable& table) {
  out << "approach,metric";
  for (const std::string& g : table.games) out << ',' << g;
  out << ",Avg.\n";
  for (const ReportRow& row : table.rows) {
    for (const EvalReport* r : {&row.exact, &row.type_only}) {
      out << row.approach << ',' << (r->exact_match ? "exact" : "type");
      for (const auto& [game, acc] : r->per_game)
        out << ',' << FormatFixed(acc);
      out << ',' << FormatFixed(r->micro_average) << '\n';
    }
  }
}

void WriteReportJson(std::ostream& out, const ReportTable& table) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["games"] = table.games;
  ordered_json rows = ordered_json::array();
  for (const ReportRow& row : table.rows) {
    ordered_json r;
    r["approach"] = row.approach;
    for (const EvalReport* rep : {&row.exact, &row.type_only}) {
      ordered_json m;
      ordered_json per_game = ordered_json::object();
      for (const auto& [game, acc] : rep->per_game) {
        per_game[game] = acc;
      }
      m["per_game"] = std::move(per_game);
      m["avg"] = rep->micro_average;
      m["n_correct"] = rep->n_correct;
      m["n_sentences"] = rep->n_sentences;
      r[rep->exact_match ? "exact" : "type_only"] = std::move(m);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "iteration,label_f1,theta_delta\n";
  for (const CurvePoint& p : curve) {
    out << p.iteration << ',' << FormatFixed(p.label_f1) << ','
        << FormatFixed(p.theta_delta) << '\n';
  }
}

}  // namespace item
