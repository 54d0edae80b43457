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

#ifndef ITEM_EVAL_HPP_
#define ITEM_EVAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "item/corpus.hpp"
#include "item/learn.hpp"
#include "item/logic.hpp"

namespace item {

// Fraction of positions where the prediction matches the gold event: the
// full ground event when exact_match, the type only otherwise. Throws
// kLengthMismatch. Empty sequences score 0.
double Accuracy(std::span<const GroundEvent> predicted,
                std::span<const GroundEvent> gold, bool exact_match);

struct NarrativeResult {
  std::string game;
  std::vector<GroundEvent> predicted;
  std::vector<GroundEvent> gold;
};

struct EvalReport {
  // Game id -> accuracy, in input order.
  std::vector<std::pair<std::string, double>> per_game;
  double micro_average = 0.0;
  std::size_t n_sentences = 0;
  std::size_t n_correct = 0;
  bool exact_match = true;
};

// Pooled correct / total. Throws kInvalidArgument without narratives.
EvalReport MicroAverage(std::span<const NarrativeResult> results,
                        bool exact_match);

// Gold events of a narrative. Throws kInvalidArgument when one is missing.
std::vector<GroundEvent> GoldSequence(const Narrative& narrative);

double F1(double precision, double recall);

// Positives are examples labeled 1; a true positive's event equals its
// sentence's gold event. Recall is over the examples whose event equals
// their sentence's gold event. Sentences without gold are ignored.
double LabelF1(std::span<const TrainingExample> examples,
               std::span<const std::uint8_t> labels,
               std::span<const Narrative> narratives);

struct ReportRow {
  std::string approach;
  EvalReport exact;
  EvalReport type_only;
};

struct ReportTable {
  std::vector<std::string> games;
  std::vector<ReportRow> rows;
};

ReportRow MakeRow(std::string approach,
                  std::span<const NarrativeResult> results);

// CSV: approach,metric,<games...>,Avg. with one exact and one type row per
// approach. Numbers use six decimals.
void WriteReportCsv(std::ostream& out, const ReportTable& table);
void WriteReportJson(std::ostream& out, const ReportTable& table);

struct CurvePoint {
  std::size_t iteration = 0;
  double label_f1 = 0.0;
  double theta_delta = 0.0;
};

// CSV: iteration,label_f1,theta_delta
void WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> curve);

std::string FormatFixed(double value);

}  // namespace item

#endif  // ITEM_EVAL_HPP_
