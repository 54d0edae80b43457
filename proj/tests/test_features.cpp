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

#include <cctype>
#include <set>
#include <string>

#include "doctest.h"
#include "item/error.hpp"
#include "item/features.hpp"
#include "item/simulator.hpp"
#include "test_support.hpp"

namespace item {
namespace {

using testing::Ev;
using testing::Holding;
using testing::MakeNarrative;
using testing::Soccer;

TEST_CASE("dimension of the additive layout") {
  const auto n = std::vector{MakeNarrative("g", {"Pink7 kicks", "pass pass"})};
  const FeatureSpace space = FeatureSpace::Build(n, Soccer());
  CHECK(space.vocabulary().size() == 3);
  CHECK(space.ground_predicates().size() == 31);
  CHECK(space.dim() == 1 + 31 + 3 + 16);
  CHECK(space.event_offset() == 1 + 31 + 3);
}

TEST_CASE("minimal space") {
  const Domain d = ParseDomain(
      R"({"constants": [], "predicates": [],
          "events": [{"name": "Nothing", "params": []}]})");
  const auto n = std::vector{MakeNarrative("g", {"..."}, d)};
  CHECK(FeatureSpace::Build(n, d).dim() == 2);
  CHECK_THROWS_AS(FeatureSpace::Build(std::vector<Narrative>{}, d), Error);
}

TEST_CASE("dimension matches an independent count over a synthetic corpus") {
  SimulatorConfig c = DefaultSimulatorConfig();
  c.n_sentences = 80;
  c.seed = 5;
  std::vector<Narrative> narratives;
  for (auto& g : GenerateGames(Soccer(), c, 2)) {
    narratives.push_back(g.narrative);
  }
  std::set<std::string> words;
  for (const Narrative& n : narratives) {
    for (const Sentence& s : n.sentences) {
      std::string cur;
      for (char ch : s.text + " ") {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
          cur +=
              static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else if (!cur.empty()) {
          words.insert(cur);
          cur.clear();
        }
      }
    }
  }
  std::size_t groundings = 0;
  for (const PredicateSchema& p : Soccer().predicates()) {
    if (!p.tracked) continue;
    std::size_t g = 1;
    for (std::size_t i = 0; i < p.arity; ++i) g *= 22;  // players per slot
    groundings += g;
  }
  const FeatureSpace space = FeatureSpace::Build(narratives, Soccer());
  CHECK(space.vocabulary().size() == words.size());
  CHECK(space.dim() ==
        1 + Soccer().events().size() + words.size() + groundings);
}

TEST_CASE("vectorize slots") {
  const auto n = std::vector{MakeNarrative("g", {"p7 kicks", "pass pass"})};
  // "p7" is not a roster name here; it is an ordinary word.
  const FeatureSpace space = FeatureSpace::Build(n, Soccer());
  BeliefState s;
  s.Set(Holding("Pink7"), true);
  s.Set(Holding("Pink8"), false);
  const std::vector<std::string> tokens{"p7", "kicks"};
  const FeatureVector x = space.Vectorize(s, tokens, Ev("kick", {"Pink7"}));
  CHECK(x.dim == space.dim());
  REQUIRE(x.active.size() == 5);
  CHECK(x.active[0] == 0);
  CHECK(x.active[2] == *space.WordSlot("kicks"));
  CHECK(x.active[3] == *space.WordSlot("p7"));
  CHECK(x.active[4] == *space.EventSlot(*Soccer().FindEvent("kick")));

  const std::vector<std::string> dup{"pass", "pass", "unseen"};
  const FeatureVector y =
      space.Vectorize(BeliefState::Top(), dup, Ev("Nothing"));
  CHECK(y.active.size() == 3);  // bias, pass, Nothing
}

TEST_CASE("arguments do not change the vector") {
  const auto n = std::vector{MakeNarrative("g", {"Pink1 passes to Pink2"})};
  const FeatureSpace space = FeatureSpace::Build(n, Soccer());
  const auto& tokens = n[0].sentences[0].tokens;
  CHECK(space.Vectorize(BeliefState::Top(), tokens,
                        Ev("pass", {"Pink1", "Pink2"})) ==
        space.Vectorize(BeliefState::Top(), tokens,
                        Ev("pass", {"Pink2", "Pink1"})));
}

TEST_CASE("two-bit state and conjunction blocks") {
  const auto n = std::vector{MakeNarrative("g", {"a b"})};
  const FeatureSpace two =
      FeatureSpace::Build(n, Soccer(), {.two_bit_state = true});
  CHECK(two.dim() == 1 + 62 + 2 + 16);
  BeliefState s;
  s.Set(Holding("Pink1"), false);
  CHECK(two.Vectorize(s, {}, Ev("Nothing")).active.size() == 3);

  const FeatureSpace conj =
      FeatureSpace::Build(n, Soccer(), {.event_conjunctions = true});
  CHECK(conj.conjunction_width() == 31 + 2);
  CHECK(conj.dim() == 1 + 31 + 2 + 16 + 16 * 33);
  const std::vector<std::string> tokens{"a"};
  BeliefState h;
  h.Set(Holding("Pink1"), true);
  const EventTypeId kick = *Soccer().FindEvent("kick");
  const FeatureVector x = conj.Vectorize(h, tokens, Ev("kick", {"Pink1"}));
  REQUIRE(x.active.size() == 6);
  const std::size_t block = conj.conjunction_offset() + kick * 33;
  CHECK(x.active[4] == block + (x.active[1] - 1));
  CHECK(x.active[5] == block + (x.active[2] - 1));
}

TEST_CASE("rebuilding from slot tables") {
  const auto n = std::vector{MakeNarrative("g", {"a b"})};
  const FeatureSpace space = FeatureSpace::Build(n, Soccer());
  const FeatureSpace again(Soccer(), space.event_types(), space.vocabulary(),
                           space.ground_predicates(), space.options());
  CHECK(again.dim() == space.dim());
  CHECK_THROWS_AS(FeatureSpace(Soccer(), {"fly"}, {}, {}, {}), Error);
}

}  // namespace
}  // namespace item
