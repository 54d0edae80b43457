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

#ifndef ITEM_LOGIC_HPP_
#define ITEM_LOGIC_HPP_

// Meaning representation language: constants, state predicates, event
// schemas with STRIPS precondition/effect templates, belief states, and the
// progression operator.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace item {

using ConstantId = std::uint32_t;
using PredicateId = std::uint32_t;
using EventTypeId = std::uint32_t;
// Dense index of a ground predicate over the full constant set.
using AtomId = std::uint32_t;

inline constexpr std::string_view kNothingEvent = "Nothing";
inline constexpr std::string_view kDefaultType = "player";

struct Constant {
  std::string name;
  std::string type{kDefaultType};
};

struct PredicateSchema {
  std::string name;
  std::size_t arity = 0;
  // Per-argument constant type; used for the tracked feature groundings and
  // for exclusivity. Empty entries default to "player".
  std::vector<std::string> arg_types;
  // At most one grounding may be true at a time (e.g. holding).
  bool exclusive = false;
  // Groundings become state features.
  bool tracked = true;
};

struct Term {
  std::string name;
  bool is_variable = false;

  friend bool operator==(const Term&, const Term&) = default;
};

struct LiteralTemplate {
  std::string predicate;
  std::vector<Term> args;
  bool negated = false;
};

struct Parameter {
  std::string name;
  std::string type{kDefaultType};
};

struct EventSchema {
  std::string name;
  std::vector<Parameter> params;
  std::vector<LiteralTemplate> preconditions;
  std::vector<LiteralTemplate> effects;

  std::size_t arity() const { return params.size(); }
};

// A ground literal over an atom of the domain.
struct Literal {
  AtomId atom = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct GroundEvent {
  EventTypeId type = 0;
  std::vector<ConstantId> args;

  friend auto operator<=>(const GroundEvent&, const GroundEvent&) = default;
  friend bool operator==(const GroundEvent&, const GroundEvent&) = default;
};

// A ground event together with its instantiated axiom.
struct GroundedEvent {
  GroundEvent event;
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
};

// Partial truth assignment over ground predicates. Absent atoms are unknown;
// the empty assignment is the top state, in which anything may hold.
class BeliefState {
 public:
  BeliefState() = default;

  static BeliefState Top() { return BeliefState(); }

  std::optional<bool> Value(AtomId atom) const;
  void Set(AtomId atom, bool value);

  bool IsTop() const { return assignments_.empty(); }
  std::size_t size() const { return assignments_.size(); }

  // Sorted by atom id.
  const std::vector<std::pair<AtomId, bool>>& assignments() const {
    return assignments_;
  }

  std::size_t Hash() const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
  friend auto operator<=>(const BeliefState&, const BeliefState&) = default;

 private:
  std::vector<std::pair<AtomId, bool>> assignments_;
};

struct BeliefStateHash {
  std::size_t operator()(const BeliefState& s) const { return s.Hash(); }
};

// The tuple (constants, variables, predicates, events) plus effect axioms.
// Immutable after construction; construction validates every invariant and
// throws Error(kInvalidDomain) on violations.
class Domain {
 public:
  Domain(std::vector<Constant> constants,
         std::vector<PredicateSchema> predicates,
         std::vector<EventSchema> events);

  const std::vector<Constant>& constants() const { return constants_; }
  const std::vector<PredicateSchema>& predicates() const { return predicates_; }
  const std::vector<EventSchema>& events() const { return events_; }
  // Every variable name used by some schema, sorted.
  const std::vector<std::string>& variables() const { return variables_; }

  std::optional<ConstantId> FindConstant(std::string_view name) const;
  // Exact match first, then case-insensitive.
  std::optional<ConstantId> FindConstantLoose(std::string_view name) const;
  std::optional<PredicateId> FindPredicate(std::string_view name) const;
  std::optional<EventTypeId> FindEvent(std::string_view name) const;
  std::optional<EventTypeId> FindEventLoose(std::string_view name) const;

  EventTypeId nothing() const { return nothing_; }
  const EventSchema& schema(EventTypeId type) const { return events_[type]; }

  // Constants of the given type, in declaration order.
  const std::vector<ConstantId>& ConstantsOfType(std::string_view type) const;

  std::size_t num_atoms() const { return num_atoms_; }
  AtomId Atom(PredicateId predicate, std::span<const ConstantId> args) const;
  // Inverse of Atom().
  std::pair<PredicateId, std::vector<ConstantId>> DecodeAtom(AtomId atom) const;
  // Resolves a ground literal by names. Throws kUnknownPredicate,
  // kUnknownConstant or kArityMismatch.
  Literal ResolveLiteral(std::string_view predicate,
                         std::span<const std::string> args,
                         bool negated = false) const;

  // Groundings of tracked predicates over their typed rosters, in predicate
  // declaration order then mixed-radix argument order.
  const std::vector<AtomId>& tracked_atoms() const { return tracked_atoms_; }

  // Atoms forced false when `atom` becomes true (other groundings of an
  // exclusive predicate); empty for non-exclusive predicates.
  const std::vector<AtomId>& ExclusivePeers(AtomId atom) const;

  // Positional grounding. Throws kArityMismatch or kUnknownConstant.
  GroundedEvent Ground(const GroundEvent& event) const;
  // Grounding by explicit variable binding. Throws kMissingBinding,
  // kUnknownConstant, kArityMismatch or kUnknownEventType.
  GroundedEvent Ground(std::string_view schema,
                       const std::map<std::string, std::string>& binding) const;

  GroundEvent MakeEvent(std::string_view name,
                        std::span<const std::string> args) const;

  std::string Format(const GroundEvent& event) const;
  std::string FormatAtom(AtomId atom) const;
  std::string FormatState(const BeliefState& state) const;

 private:
  Literal Instantiate(const LiteralTemplate& tmpl, const EventSchema& schema,
                      std::span<const ConstantId> args) const;

  std::vector<Constant> constants_;
  std::vector<PredicateSchema> predicates_;
  std::vector<EventSchema> events_;
  std::vector<std::string> variables_;
  std::unordered_map<std::string, ConstantId> constant_index_;
  std::unordered_map<std::string, PredicateId> predicate_index_;
  std::unordered_map<std::string, EventTypeId> event_index_;
  std::map<std::string, std::vector<ConstantId>, std::less<>> by_type_;
  std::vector<AtomId> atom_offset_;
  std::size_t num_atoms_ = 0;
  std::vector<AtomId> tracked_atoms_;
  std::unordered_map<AtomId, std::vector<AtomId>> exclusive_peers_;
  EventTypeId nothing_ = 0;
};

// Checks one schema against the constants and predicates: unique params,
// no free variables, literal arity and argument types, no conflicting
// effects. Throws Error(kInvalidDomain).
void ValidateEventSchema(const EventSchema& event,
                         const std::vector<Constant>& constants,
                         const std::vector<PredicateSchema>& predicates);

// True iff no literal is contradicted by the state. Unknown atoms are
// consistent with either sign. Throws kUnknownPredicate for atoms outside
// the domain.
bool Consistent(const Domain& domain, const BeliefState& state,
                std::span<const Literal> literals);

// Successor state. Applies effects in order under the frame assumption and
// enforces exclusivity; returns Top() when the preconditions are
// inconsistent with `state`.
BeliefState Progress(const Domain& domain, const BeliefState& state,
                     const GroundedEvent& event);
BeliefState Progress(const Domain& domain, const BeliefState& state,
                     const GroundEvent& event);

std::string ToLower(std::string_view text);

}  // namespace item

#endif  // ITEM_LOGIC_HPP_
