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

#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "item/corpus.hpp"
#include "item/error.hpp"
#include "item/simulator.hpp"
#include "test_support.hpp"

namespace item {
namespace {

using testing::Ev;
using testing::MakeNarrative;
using testing::Soccer;

std::vector<std::string> Names(const std::vector<ConstantId>& ids) {
  std::vector<std::string> out;
  for (ConstantId c : ids) out.push_back(Soccer().constants()[c].name);
  return out;
}

TEST_CASE("tokenize") {
  CHECK(Tokenize("Purple10 kicks to Purple11.") ==
        std::vector<std::string>{"purple10", "kicks", "to", "purple11"});
  CHECK(Tokenize("").empty());
  const AliasTable aliases(
      std::map<std::string, std::string>{{"pink goalie", "Pink1"}});
  CHECK(Tokenize("The pink goalie kicks off to Pink2.", &aliases) ==
        std::vector<std::string>{"pink1", "kicks", "off", "to", "pink2"});
}

TEST_CASE("mentions are players in textual order, first mention only") {
  const Sentence s = MakeSentence(
      Soccer(), 0,
      "Pink6 steals the ball from Purple6, Pink6 again; Pink team");
  CHECK(Names(s.mentions) == std::vector<std::string>{"Pink6", "Purple6"});
}

TEST_CASE("extract arguments") {
  const Narrative n =
      MakeNarrative("g", {"Pink7 has it", "He kicks the ball to Pink10",
                          "Offside has been called on the Pink team.",
                          "Pink6 steals the ball from Purple6"});
  CHECK(Names(ExtractArguments(n, 1, 2)) ==
        std::vector<std::string>{"Pink7", "Pink10"});
  CHECK(ExtractArguments(n, 2, 0).empty());
  CHECK(Names(ExtractArguments(n, 2, 1)) == std::vector<std::string>{"Pink10"});
  CHECK(Names(ExtractArguments(n, 3, 1)) ==
        std::vector<std::string>{"Pink6", "Purple6"});
  CHECK(ExtractArguments(MakeNarrative("h", {"quiet"}), 0, 2).empty());
}

TEST_CASE("carried arguments skip silent sentences") {
  const Narrative n = MakeNarrative("g", {"Pink2 and Pink3", "nothing", "x"});
  const auto carried = CarriedArguments(n);
  REQUIRE(carried.size() == 3);
  CHECK_FALSE(carried[0].has_value());
  CHECK(Names({*carried[1]}) == std::vector<std::string>{"Pink3"});
  CHECK(Names({*carried[2]}) == std::vector<std::string>{"Pink3"});
}

TEST_CASE("argument tuples") {
  const std::vector<ConstantId> args{3, 5, 7};
  const auto pairs = ArgumentTuples(args, 2);
  CHECK(pairs.size() == 6);
  CHECK(pairs.front() == std::vector<ConstantId>{3, 5});
  CHECK(pairs[1] == std::vector<ConstantId>{3, 7});
  CHECK(pairs.back() == std::vector<ConstantId>{7, 5});
  CHECK(ArgumentTuples(args, 0) == std::vector<std::vector<ConstantId>>{{}});
  CHECK(ArgumentTuples(args, 4).empty());
  // A repeated constant never fills two slots.
  const std::vector<ConstantId> repeated{4, 4};
  CHECK(ArgumentTuples(repeated, 2).empty());
  CHECK(ArgumentTuples(repeated, 1).size() == 2);
}

TEST_CASE("corpus parsing") {
  std::istringstream in(
      R"({"game": "g1", "idx": 1, "text": "Pink2 kicks it.", "gold": {"event": "kick", "args": ["Pink2"]}}
{"game": "g1", "idx": 0, "text": "Pink1 passes to Pink2.", "gold": {"event": "pass", "args": ["Pink1", "Pink2"]}}

{"game": "g2", "idx": 0, "text": "Quiet.", "gold": null}
)");
  const auto narratives = ParseCorpus(in, Soccer());
  REQUIRE(narratives.size() == 2);
  CHECK(narratives[0].id == "g1");
  REQUIRE(narratives[0].size() == 2);
  CHECK(narratives[0].sentences[0].text == "Pink1 passes to Pink2.");
  CHECK(narratives[0].sentences[1].gold == Ev("kick", {"Pink2"}));
  CHECK_FALSE(narratives[1].sentences[0].gold.has_value());

  std::ostringstream out;
  WriteCorpus(out, narratives, Soccer());
  std::istringstream again(out.str());
  const auto round = ParseCorpus(again, Soccer());
  REQUIRE(round.size() == 2);
  for (std::size_t i = 0; i < round.size(); ++i) {
    REQUIRE(round[i].size() == narratives[i].size());
    for (std::size_t t = 0; t < round[i].size(); ++t) {
      CHECK(round[i].sentences[t].tokens == narratives[i].sentences[t].tokens);
      CHECK(round[i].sentences[t].gold == narratives[i].sentences[t].gold);
    }
  }
}

TEST_CASE("corpus errors") {
  auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      ParseCorpus(in, Soccer());
    } catch (const Error& e) {
      return std::pair{e.code(), e.line()};
    }
    return std::pair{ErrorCode::kOk, std::size_t{0}};
  };
  CHECK(code("") == std::pair{ErrorCode::kOk, std::size_t{0}});
  CHECK(code("{\"game\": \"g\", \"idx\": 0, \"text\": \"a\"}\n"
             "{\"game\": \"g\", \"idx\": 1, \"text\": \"b\", "
             "\"gold\": {\"event\": \"fly\", \"args\": []}}") ==
        std::pair{ErrorCode::kUnknownEventType, std::size_t{2}});
  CHECK(code("{\"game\": \"g\", \"idx\": 0, \"text\": \"a\", "
             "\"gold\": {\"event\": \"kick\", \"args\": [\"Zed\"]}}")
            .first == ErrorCode::kUnknownConstant);
  CHECK(code("not json").first == ErrorCode::kParseError);
  CHECK(code("{\"game\": \"g\", \"idx\": 1, \"text\": \"a\"}").first ==
        ErrorCode::kParseError);  // gap at 0
  std::vector<Narrative> none;
  CHECK_THROWS_AS(LoadCorpus("/nonexistent.jsonl", Soccer()), Error);
}

TEST_CASE("convert tsv") {
  std::istringstream in(
      "Purple10 kicks to Purple11.\tkick(purple10)\n"
      "Filler line\t\n"
      "Pink3 passes to Pink4.\tpass( Pink3 , Pink4 )\r\n");
  const Narrative n = ConvertTsv(in, "2001", Soccer());
  REQUIRE(n.size() == 3);
  CHECK(n.id == "2001");
  CHECK(n.sentences[0].gold == Ev("kick", {"Purple10"}));
  CHECK_FALSE(n.sentences[1].gold.has_value());
  CHECK(n.sentences[2].gold == Ev("pass", {"Pink3", "Pink4"}));
  std::istringstream bad("x\tfly(Pink1)\n");
  CHECK_THROWS_AS(ConvertTsv(bad, "g", Soccer()), Error);
}

TEST_CASE("aliases load") {
  const AliasTable t =
      AliasTable::Load(std::string(ITEM_SOURCE_DIR) + "/data/aliases.json");
  CHECK_FALSE(t.empty());
  CHECK_THROWS_AS(AliasTable::Parse("[]", "x"), Error);
}

TEST_CASE("simulator gold feasibility and determinism") {
  SimulatorConfig c = DefaultSimulatorConfig();
  c.n_sentences = 200;
  c.p_miss = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    c.seed = seed;
    const SyntheticGame g = GenerateSynthetic(Soccer(), c);
    REQUIRE(g.narrative.size() == 200);
    BeliefState s = BeliefState::Top();
    for (const Sentence& sent : g.narrative.sentences) {
      REQUIRE(sent.gold.has_value());
      const GroundedEvent ge = Soccer().Ground(*sent.gold);
      CHECK(Consistent(Soccer(), s, ge.preconditions));
      s = Progress(Soccer(), s, ge);
    }
  }
  c.seed = 9;
  std::ostringstream a, b;
  const SyntheticGame g1 = GenerateSynthetic(Soccer(), c);
  const SyntheticGame g2 = GenerateSynthetic(Soccer(), c);
  WriteCorpus(a, std::vector{g1.narrative}, Soccer());
  WriteCorpus(b, std::vector{g2.narrative}, Soccer());
  CHECK(a.str() == b.str());
}

TEST_CASE("simulator edge settings") {
  SimulatorConfig c = DefaultSimulatorConfig();
  c.n_sentences = 3;
  c.p_nothing = 0.0;
  c.p_miss = 0.0;
  c.seed = 1;
  CHECK(GenerateSynthetic(Soccer(), c).narrative.size() == 3);
  c.p_nothing = 1.0;
  c.n_sentences = 20;
  for (const Sentence& s : GenerateSynthetic(Soccer(), c).narrative.sentences) {
    CHECK(s.gold->type == Soccer().nothing());
  }
  c.p_nothing = 1.5;
  CHECK_THROWS_AS(GenerateSynthetic(Soccer(), c), Error);
  const auto games = GenerateGames(Soccer(), DefaultSimulatorConfig(), 2);
  REQUIRE(games.size() == 2);
  CHECK(games[0].narrative.id == "game1");
  CHECK(games[1].narrative.id == "game2");
}

}  // namespace
}  // namespace item
