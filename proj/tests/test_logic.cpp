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

#include <string>

#include "doctest.h"
#include "item/domain_io.hpp"
#include "item/error.hpp"
#include "item/logic.hpp"
#include "test_support.hpp"

namespace item {
namespace {

using testing::Ev;
using testing::Holding;
using testing::Soccer;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST_CASE("bundled domain counts") {
  const Domain& d = Soccer();
  CHECK(d.events().size() == 16);
  CHECK(d.constants().size() == 24);
  CHECK(d.predicates().size() == 10);
  std::size_t binary = 0, unary = 0, nullary = 0;
  for (const EventSchema& e : d.events()) {
    if (e.name == kNothingEvent) continue;
    (e.arity() == 2 ? binary : e.arity() == 1 ? unary : nullary)++;
  }
  CHECK(binary == 3);
  CHECK(unary == 4);
  CHECK(nullary == 8);
  CHECK(d.schema(d.nothing()).name == "Nothing");
}

TEST_CASE("ground pass") {
  const GroundedEvent g =
      Soccer().Ground("pass", {{"player1", "Pink1"}, {"player2", "Pink2"}});
  CHECK(Soccer().Format(g.event) == "pass(Pink1,Pink2)");
  REQUIRE(g.preconditions.size() == 1);
  CHECK(g.preconditions[0] == Literal{Holding("Pink1"), false});
  REQUIRE(g.effects.size() == 1);
  CHECK(g.effects[0] == Literal{Holding("Pink2"), false});
}

TEST_CASE("ground Nothing and kick") {
  const GroundedEvent nothing = Soccer().Ground("Nothing", {});
  CHECK(nothing.preconditions.empty());
  CHECK(nothing.effects.empty());
  const GroundedEvent kick = Soccer().Ground("kick", {{"player1", "Purple9"}});
  CHECK(kick.preconditions ==
        std::vector<Literal>{{Holding("Purple9"), false}});
  CHECK(kick.effects == std::vector<Literal>{{Holding("Purple9"), true}});
}

TEST_CASE("ground errors") {
  CHECK(CodeOf([] { Soccer().Ground("pass", {{"player1", "Pink1"}}); }) ==
        ErrorCode::kMissingBinding);
  CHECK(CodeOf([] { Soccer().Ground("kick", {{"player1", "Nobody"}}); }) ==
        ErrorCode::kUnknownConstant);
  CHECK(CodeOf([] { Soccer().Ground("fly", {}); }) ==
        ErrorCode::kUnknownEventType);
  CHECK(CodeOf([] {
          Soccer().Ground(GroundEvent{*Soccer().FindEvent("kick"), {}});
        }) == ErrorCode::kArityMismatch);
}

TEST_CASE("distinct bindings give distinct ground events") {
  const GroundEvent a = Ev("pass", {"Pink1", "Pink2"});
  const GroundEvent b = Ev("pass", {"Pink2", "Pink1"});
  CHECK(a != b);
}

TEST_CASE("consistency") {
  const Literal h7{Holding("Pink7"), false};
  const Literal h9{Holding("Pink9"), false};
  CHECK(Consistent(Soccer(), BeliefState::Top(), std::vector{h7}));
  BeliefState s;
  s.Set(h7.atom, true);
  s.Set(h9.atom, false);
  CHECK_FALSE(Consistent(Soccer(), s, std::vector{h9}));
  BeliefState corner;
  const Literal at_corner = Soccer().ResolveLiteral("atCorner", {});
  corner.Set(at_corner.atom, true);
  CHECK(Consistent(Soccer(), corner, std::vector<Literal>{}));
  CHECK(CodeOf([&] {
          Consistent(
              Soccer(), s,
              std::vector{Literal{static_cast<AtomId>(Soccer().num_atoms() + 5),
                                  false}});
        }) == ErrorCode::kUnknownPredicate);
}

TEST_CASE("progress examples") {
  const BeliefState s1 =
      Progress(Soccer(), BeliefState::Top(), Ev("steal", {"Pink7"}));
  CHECK(s1.Value(Holding("Pink7")) == true);
  for (ConstantId c : Soccer().ConstantsOfType("player")) {
    const std::string& name = Soccer().constants()[c].name;
    if (name != "Pink7") CHECK(s1.Value(Holding(name)) == false);
  }
  CHECK(Progress(Soccer(), s1, Ev("kick", {"Pink9"})).IsTop());
  CHECK(Progress(Soccer(), s1, Ev("Nothing")) == s1);
  const BeliefState after_kick = Progress(Soccer(), s1, Ev("kick", {"Pink7"}));
  CHECK(after_kick.Value(Holding("Pink7")) == false);
}

TEST_CASE("progress does not mutate its input") {
  BeliefState s;
  s.Set(Holding("Pink3"), true);
  const BeliefState copy = s;
  (void)Progress(Soccer(), s, Ev("pass", {"Pink3", "Pink4"}));
  CHECK(s == copy);
}

TEST_CASE("belief state ordering and hashing") {
  BeliefState a, b;
  a.Set(3, true);
  a.Set(1, false);
  b.Set(1, false);
  b.Set(3, true);
  CHECK(a == b);
  CHECK(a.Hash() == b.Hash());
  CHECK(a.assignments().front().first == 1);
  a.Set(3, false);
  CHECK(a.Value(3) == false);
  CHECK_FALSE(BeliefState::Top().Value(0).has_value());
}

TEST_CASE("domain validation") {
  const std::string prefix =
      R"({"constants": ["A", "B"], "predicates": [{"name": "h", "arity": 1}],
"events": [)";
  auto parse = [&](const std::string& events) {
    return CodeOf([&] { ParseDomain(prefix + events + "]}"); });
  };
  CHECK(parse(R"({"name": "Nothing", "params": []})") == ErrorCode::kOk);
  const Domain implicit =
      ParseDomain(prefix + R"({"name": "x", "params": ["p"]}]})");
  CHECK(implicit.schema(implicit.nothing()).name == "Nothing");
  CHECK(implicit.events().size() == 2);
  CHECK(parse(R"({"name": "Nothing", "params": ["p"]})") ==
        ErrorCode::kInvalidDomain);
  CHECK(parse(R"({"name": "Nothing", "params": []},
{"name": "x", "params": ["p"], "effects": [{"predicate": "h", "args": ["q"]}]})") ==
        ErrorCode::kInvalidDomain);  // unknown argument
  CHECK(parse(R"({"name": "Nothing", "params": []},
{"name": "x", "params": ["p"], "effects": [
  {"predicate": "h", "args": ["p"]},
  {"predicate": "h", "args": ["p"], "negated": true}]})") ==
        ErrorCode::kInvalidDomain);  // conflicting effects
  CHECK(parse(R"({"name": "Nothing", "params": []},
{"name": "x", "params": ["p"], "effects": [{"predicate": "h", "args": []}]})") ==
        ErrorCode::kInvalidDomain);  // literal arity
}

TEST_CASE("domain errors carry a line") {
  const std::string text =
      "{\"constants\": [\"A\"],\n\"predicates\": [],\n"
      "\"events\": [\n{\"name\": \"Nothing\", \"params\": []},\n"
      "{\"name\": \"x\", \"params\": [\"p\", \"p\"]}]}";
  try {
    ParseDomain(text);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidDomain);
    CHECK(e.line() == 5);
  }
  CHECK(CodeOf([] { ParseDomain("{"); }) == ErrorCode::kParseError);
  CHECK(CodeOf([] { LoadDomain("/nonexistent/domain.json"); }) ==
        ErrorCode::kFileNotFound);
}

}  // namespace
}  // namespace item
