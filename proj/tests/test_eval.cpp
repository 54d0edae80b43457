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

#include <sstream>
#include <string>

#include "doctest.h"
#include "item/error.hpp"
#include "item/eval.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace item {
namespace {

using testing::Ev;

TEST_CASE("accuracy") {
  const std::vector<GroundEvent> gold{Ev("pass", {"Pink1", "Pink2"}),
                                      Ev("goal"), Ev("corner"),
                                      Ev("kick", {"Pink3"})};
  CHECK(Accuracy(gold, gold, true) == 1.0);
  std::vector<GroundEvent> pred = gold;
  pred[0] = Ev("pass", {"Pink2", "Pink1"});
  CHECK(Accuracy(pred, gold, true) == 0.75);
  CHECK(Accuracy(pred, gold, false) == 1.0);
  pred[1] = Ev("corner");
  CHECK(Accuracy(pred, gold, false) == 0.75);
  CHECK(Accuracy(pred, gold, false) >= Accuracy(pred, gold, true));
  CHECK_THROWS_AS(Accuracy(std::vector<GroundEvent>{}, gold, true), Error);
  CHECK(Accuracy(std::vector<GroundEvent>{}, std::vector<GroundEvent>{},
                 true) == 0.0);
}

TEST_CASE("micro average pools sentences") {
  const GroundEvent g = Ev("goal"), c = Ev("corner");
  const std::vector<NarrativeResult> rs{{"a", {g, g}, {g, g}},
                                        {"b", {c, c}, {g, g}}};
  const EvalReport r = MicroAverage(rs, true);
  CHECK(r.micro_average == 0.5);
  CHECK(r.n_sentences == 4);
  CHECK(r.n_correct == 2);
  REQUIRE(r.per_game.size() == 2);
  CHECK(r.per_game[0] == std::pair<std::string, double>{"a", 1.0});
  CHECK(MicroAverage(std::vector{rs[0]}, true).micro_average == 1.0);

  const std::vector<NarrativeResult> uneven{{"a", {g}, {g}},
                                            {"b", {c, c, g}, {g, g, g}}};
  const EvalReport u = MicroAverage(uneven, true);
  CHECK(u.micro_average == doctest::Approx((1.0 * 1 + (1.0 / 3) * 3) / 4));
  CHECK_THROWS_AS(MicroAverage(std::vector<NarrativeResult>{}, true), Error);
}

TEST_CASE("f1") {
  CHECK(F1(0.5, 0.5) == 0.5);
  CHECK(F1(0.0, 0.0) == 0.0);
  CHECK(F1(1.0, 1.0) == 1.0);
}

TEST_CASE("gold sequence") {
  Narrative n = testing::MakeNarrative("g", {"a"});
  CHECK_THROWS_AS(GoldSequence(n), Error);
  n.sentences[0].gold = Ev("goal");
  CHECK(GoldSequence(n) == std::vector{Ev("goal")});
}

TEST_CASE("report emission") {
  const GroundEvent g = Ev("goal"), c = Ev("corner");
  const std::vector<NarrativeResult> rs{{"2001", {g, c}, {g, g}},
                                        {"2002", {g}, {g}}};
  ReportTable table{{"2001", "2002"},
                    {MakeRow("ITEM", rs), MakeRow("Baseline-0", rs)}};
  std::ostringstream csv;
  WriteReportCsv(csv, table);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "approach,metric,2001,2002,Avg.");
  CHECK(first == "ITEM,exact,0.500000,1.000000,0.666667");
  std::size_t n = 2;
  for (std::string l; std::getline(lines, l);) ++n;
  CHECK(n == 1 + 2 * 2);

  std::ostringstream js;
  WriteReportJson(js, table);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["exact"]["avg"].get<double>() ==
        doctest::Approx(2.0 / 3));
  CHECK(doc["rows"][0]["type_only"]["per_game"]["2002"] == 1.0);

  std::ostringstream curve;
  const std::vector<CurvePoint> points{{1, 0.25, 3.0}, {2, 0.5, 0.0}};
  WriteCurveCsv(curve, points);
  CHECK(curve.str() ==
        "iteration,label_f1,theta_delta\n1,0.250000,3.000000\n2,0.500000,0."
        "000000\n");
}

}  // namespace
}  // namespace item
