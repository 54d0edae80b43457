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

#include "item/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "item/error.hpp"

namespace item {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidDomain, message);
}

// Cartesian product of rosters, last argument varying fastest.
std::vector<std::vector<ConstantId>> Product(
    const std::vector<const std::vector<ConstantId>*>& rosters) {
  std::vector<std::vector<ConstantId>> out(1);
  for (const auto* roster : rosters) {
    std::vector<std::vector<ConstantId>> next;
    for (const auto& prefix : out) {
      for (ConstantId c : *roster) {
        auto row = prefix;
        row.push_back(c);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::string ToLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<bool> BeliefState::Value(AtomId atom) const {
  auto it = std::lower_bound(
      assignments_.begin(), assignments_.end(), atom,
      [](const std::pair<AtomId, bool>& p, AtomId a) { return p.first < a; });
  if (it == assignments_.end() || it->first != atom) return std::nullopt;
  return it->second;
}

void BeliefState::Set(AtomId atom, bool value) {
  auto it = std::lower_bound(
      assignments_.begin(), assignments_.end(), atom,
      [](const std::pair<AtomId, bool>& p, AtomId a) { return p.first < a; });
  if (it != assignments_.end() && it->first == atom) {
    it->second = value;
  } else {
    assignments_.insert(it, {atom, value});
  }
}

std::size_t BeliefState::Hash() const {
  std::size_t h = 0x84222325u;
  for (const auto& [atom, value] : assignments_) {
    h ^= (static_cast<std::size_t>(atom) << 1 | (value ? 1u : 0u)) +
         0x9e3779b9u + (h << 6) + (h >> 2);
  }
  return h;
}

void ValidateEventSchema(const EventSchema& e,
                         const std::vector<Constant>& constants,
                         const std::vector<PredicateSchema>& predicates) {
  if (e.name.empty()) Invalid("event with empty name");
  auto find_constant = [&](const std::string& name) -> const Constant* {
    for (const auto& c : constants) {
      if (c.name == name) return &c;
    }
    return nullptr;
  };
  auto type_or_default = [](const std::string& t) {
    return t.empty() ? std::string(kDefaultType) : t;
  };
  std::set<std::string> param_names;
  for (const auto& param : e.params) {
    if (param.name.empty()) Invalid("event '" + e.name + "': empty param");
    if (!param_names.insert(param.name).second) {
      Invalid("event '" + e.name + "': duplicate param '" + param.name + "'");
    }
    if (find_constant(param.name) != nullptr) {
      Invalid("event '" + e.name + "': param '" + param.name +
              "' shadows a constant");
    }
  }
  auto check = [&](const LiteralTemplate& lit, const char* where) {
    auto pit = std::find_if(
        predicates.begin(), predicates.end(),
        [&](const PredicateSchema& p) { return p.name == lit.predicate; });
    if (pit == predicates.end()) {
      Invalid("event '" + e.name + "' " + where + ": unknown predicate '" +
              lit.predicate + "'");
    }
    const auto& pred = *pit;
    if (lit.args.size() != pred.arity) {
      Invalid("event '" + e.name + "' " + where + ": predicate '" + pred.name +
              "' expects " + std::to_string(pred.arity) + " args, got " +
              std::to_string(lit.args.size()));
    }
    for (std::size_t k = 0; k < lit.args.size(); ++k) {
      const auto& term = lit.args[k];
      std::string type;
      if (term.is_variable) {
        auto it = std::find_if(
            e.params.begin(), e.params.end(),
            [&](const Parameter& p) { return p.name == term.name; });
        if (it == e.params.end()) {
          Invalid("event '" + e.name + "' " + where + ": free variable '" +
                  term.name + "'");
        }
        type = type_or_default(it->type);
      } else {
        const Constant* c = find_constant(term.name);
        if (c == nullptr) {
          Invalid("event '" + e.name + "' " + where + ": unknown constant '" +
                  term.name + "'");
        }
        type = type_or_default(c->type);
      }
      const std::string expected = k < pred.arg_types.size()
                                       ? type_or_default(pred.arg_types[k])
                                       : std::string(kDefaultType);
      if (type != expected) {
        Invalid("event '" + e.name + "' " + where + ": argument '" + term.name +
                "' has type '" + type + "' but '" + pred.name + "' expects '" +
                expected + "'");
      }
    }
  };
  for (const auto& lit : e.preconditions) check(lit, "precondition");
  for (const auto& lit : e.effects) check(lit, "effect");
  for (std::size_t a = 0; a < e.effects.size(); ++a) {
    for (std::size_t b = a + 1; b < e.effects.size(); ++b) {
      const auto& x = e.effects[a];
      const auto& y = e.effects[b];
      if (x.predicate == y.predicate && x.args == y.args &&
          x.negated != y.negated) {
        Invalid("event '" + e.name + "': conflicting effects on '" +
                x.predicate + "'");
      }
    }
  }
  if (e.name == kNothingEvent &&
      (!e.params.empty() || !e.preconditions.empty() || !e.effects.empty())) {
    Invalid("event 'Nothing' must have no params, preconditions or effects");
  }
}

Domain::Domain(std::vector<Constant> constants,
               std::vector<PredicateSchema> predicates,
               std::vector<EventSchema> events)
    : constants_(std::move(constants)),
      predicates_(std::move(predicates)),
      events_(std::move(events)) {
  for (ConstantId i = 0; i < constants_.size(); ++i) {
    auto& c = constants_[i];
    if (c.name.empty()) Invalid("constant with empty name");
    if (c.type.empty()) c.type = std::string(kDefaultType);
    if (!constant_index_.emplace(c.name, i).second) {
      Invalid("duplicate constant '" + c.name + "'");
    }
    by_type_[c.type].push_back(i);
  }

  for (PredicateId i = 0; i < predicates_.size(); ++i) {
    auto& p = predicates_[i];
    if (p.name.empty()) Invalid("predicate with empty name");
    if (!predicate_index_.emplace(p.name, i).second) {
      Invalid("duplicate predicate '" + p.name + "'");
    }
    if (p.arg_types.empty()) {
      p.arg_types.assign(p.arity, std::string(kDefaultType));
    } else if (p.arg_types.size() != p.arity) {
      Invalid("predicate '" + p.name + "': arg_types length " +
              std::to_string(p.arg_types.size()) + " != arity " +
              std::to_string(p.arity));
    }
    for (auto& t : p.arg_types) {
      if (t.empty()) t = std::string(kDefaultType);
    }
  }

  // Nothing is the noise event: present in every domain, always empty.
  bool has_nothing = false;
  for (const auto& e : events_) {
    if (e.name == kNothingEvent) has_nothing = true;
  }
  if (!has_nothing) {
    EventSchema nothing;
    nothing.name = std::string(kNothingEvent);
    events_.push_back(std::move(nothing));
  }

  std::set<std::string> variables;
  for (EventTypeId i = 0; i < events_.size(); ++i) {
    auto& e = events_[i];
    if (e.name.empty()) Invalid("event with empty name");
    if (!event_index_.emplace(e.name, i).second) {
      Invalid("duplicate event '" + e.name + "'");
    }
    if (e.name == kNothingEvent) nothing_ = i;
    ValidateEventSchema(e, constants_, predicates_);
    for (auto& param : e.params) {
      if (param.type.empty()) param.type = std::string(kDefaultType);
      variables.insert(param.name);
    }
  }
  variables_.assign(variables.begin(), variables.end());

  // Dense atom ids over the full constant set.
  const std::size_t n = constants_.size();
  atom_offset_.resize(predicates_.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < predicates_.size(); ++i) {
    atom_offset_[i] = static_cast<AtomId>(offset);
    std::size_t count = 1;
    for (std::size_t k = 0; k < predicates_[i].arity; ++k) {
      count *= n;
      if (count > (1u << 24)) {
        Invalid("predicate '" + predicates_[i].name +
                "' has too many groundings");
      }
    }
    offset += count;
  }
  num_atoms_ = offset;

  static const std::vector<ConstantId> kEmpty;
  for (PredicateId i = 0; i < predicates_.size(); ++i) {
    const auto& p = predicates_[i];
    std::vector<const std::vector<ConstantId>*> rosters;
    for (const auto& t : p.arg_types) {
      auto it = by_type_.find(t);
      rosters.push_back(it == by_type_.end() ? &kEmpty : &it->second);
    }
    const auto rows = Product(rosters);
    std::vector<AtomId> typed;
    typed.reserve(rows.size());
    for (const auto& row : rows) typed.push_back(Atom(i, row));
    if (p.tracked) {
      tracked_atoms_.insert(tracked_atoms_.end(), typed.begin(), typed.end());
    }
    if (p.exclusive) {
      std::vector<const std::vector<ConstantId>*> all_rosters;
      std::vector<ConstantId> everything(n);
      for (ConstantId c = 0; c < n; ++c) everything[c] = c;
      for (std::size_t k = 0; k < p.arity; ++k) {
        all_rosters.push_back(&everything);
      }
      for (const auto& row : Product(all_rosters)) {
        const AtomId atom = Atom(i, row);
        std::vector<AtomId> peers;
        for (AtomId other : typed) {
          if (other != atom) peers.push_back(other);
        }
        exclusive_peers_[atom] = std::move(peers);
      }
    }
  }
}

std::optional<ConstantId> Domain::FindConstant(std::string_view name) const {
  auto it = constant_index_.find(std::string(name));
  if (it == constant_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConstantId> Domain::FindConstantLoose(
    std::string_view name) const {
  if (auto exact = FindConstant(name)) return exact;
  const std::string lower = ToLower(name);
  for (ConstantId i = 0; i < constants_.size(); ++i) {
    if (ToLower(constants_[i].name) == lower) return i;
  }
  return std::nullopt;
}

std::optional<PredicateId> Domain::FindPredicate(std::string_view name) const {
  auto it = predicate_index_.find(std::string(name));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EventTypeId> Domain::FindEvent(std::string_view name) const {
  auto it = event_index_.find(std::string(name));
  if (it == event_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EventTypeId> Domain::FindEventLoose(std::string_view name) const {
  if (auto exact = FindEvent(name)) return exact;
  const std::string lower = ToLower(name);
  for (EventTypeId i = 0; i < events_.size(); ++i) {
    if (ToLower(events_[i].name) == lower) return i;
  }
  return std::nullopt;
}

const std::vector<ConstantId>& Domain::ConstantsOfType(
    std::string_view type) const {
  static const std::vector<ConstantId> kEmpty;
  auto it = by_type_.find(type);
  return it == by_type_.end() ? kEmpty : it->second;
}

AtomId Domain::Atom(PredicateId predicate,
                    std::span<const ConstantId> args) const {
  AtomId id = 0;
  for (ConstantId c : args) {
    id = static_cast<AtomId>(id * constants_.size() + c);
  }
  return atom_offset_[predicate] + id;
}

std::pair<PredicateId, std::vector<ConstantId>> Domain::DecodeAtom(
    AtomId atom) const {
  auto it = std::upper_bound(atom_offset_.begin(), atom_offset_.end(), atom);
  PredicateId p = static_cast<PredicateId>(it - atom_offset_.begin() - 1);
  // Predicates with an empty range share an offset with their successor;
  // upper_bound lands on the last of them, which owns the atom.
  std::size_t rest = atom - atom_offset_[p];
  std::vector<ConstantId> args(predicates_[p].arity);
  for (std::size_t k = args.size(); k-- > 0;) {
    args[k] = static_cast<ConstantId>(rest % constants_.size());
    rest /= constants_.size();
  }
  return {p, args};
}

Literal Domain::ResolveLiteral(std::string_view predicate,
                               std::span<const std::string> args,
                               bool negated) const {
  auto p = FindPredicate(predicate);
  if (!p) {
    throw Error(ErrorCode::kUnknownPredicate,
                "unknown predicate '" + std::string(predicate) + "'");
  }
  if (args.size() != predicates_[*p].arity) {
    throw Error(ErrorCode::kArityMismatch,
                "predicate '" + std::string(predicate) + "' expects " +
                    std::to_string(predicates_[*p].arity) + " args");
  }
  std::vector<ConstantId> ids;
  for (const auto& a : args) {
    auto c = FindConstant(a);
    if (!c) {
      throw Error(ErrorCode::kUnknownConstant, "unknown constant '" + a + "'");
    }
    ids.push_back(*c);
  }
  return Literal{Atom(*p, ids), negated};
}

const std::vector<AtomId>& Domain::ExclusivePeers(AtomId atom) const {
  static const std::vector<AtomId> kNone;
  auto it = exclusive_peers_.find(atom);
  return it == exclusive_peers_.end() ? kNone : it->second;
}

Literal Domain::Instantiate(const LiteralTemplate& tmpl,
                            const EventSchema& schema,
                            std::span<const ConstantId> args) const {
  const PredicateId p = predicate_index_.at(tmpl.predicate);
  std::vector<ConstantId> ground;
  ground.reserve(tmpl.args.size());
  for (const auto& term : tmpl.args) {
    if (term.is_variable) {
      for (std::size_t k = 0; k < schema.params.size(); ++k) {
        if (schema.params[k].name == term.name) {
          ground.push_back(args[k]);
          break;
        }
      }
    } else {
      ground.push_back(constant_index_.at(term.name));
    }
  }
  return Literal{Atom(p, ground), tmpl.negated};
}

GroundedEvent Domain::Ground(const GroundEvent& event) const {
  if (event.type >= events_.size()) {
    throw Error(ErrorCode::kUnknownEventType,
                "unknown event type id " + std::to_string(event.type));
  }
  const auto& schema = events_[event.type];
  if (event.args.size() != schema.arity()) {
    throw Error(ErrorCode::kArityMismatch,
                "event '" + schema.name + "' expects " +
                    std::to_string(schema.arity()) + " args, got " +
                    std::to_string(event.args.size()));
  }
  for (ConstantId c : event.args) {
    if (c >= constants_.size()) {
      throw Error(ErrorCode::kUnknownConstant,
                  "unknown constant id " + std::to_string(c));
    }
  }
  GroundedEvent out;
  out.event = event;
  out.preconditions.reserve(schema.preconditions.size());
  for (const auto& lit : schema.preconditions) {
    out.preconditions.push_back(Instantiate(lit, schema, event.args));
  }
  out.effects.reserve(schema.effects.size());
  for (const auto& lit : schema.effects) {
    out.effects.push_back(Instantiate(lit, schema, event.args));
  }
  return out;
}

GroundedEvent Domain::Ground(
    std::string_view schema_name,
    const std::map<std::string, std::string>& binding) const {
  auto type = FindEvent(schema_name);
  if (!type) {
    throw Error(ErrorCode::kUnknownEventType,
                "unknown event type '" + std::string(schema_name) + "'");
  }
  const auto& schema = events_[*type];
  if (binding.size() > schema.arity()) {
    throw Error(ErrorCode::kArityMismatch,
                "binding for '" + schema.name + "' has " +
                    std::to_string(binding.size()) + " entries, schema has " +
                    std::to_string(schema.arity()) + " params");
  }
  GroundEvent event{*type, {}};
  for (const auto& param : schema.params) {
    auto it = binding.find(param.name);
    if (it == binding.end()) {
      throw Error(
          ErrorCode::kMissingBinding,
          "param '" + param.name + "' of '" + schema.name + "' is unbound");
    }
    auto c = FindConstant(it->second);
    if (!c) {
      throw Error(ErrorCode::kUnknownConstant,
                  "unknown constant '" + it->second + "'");
    }
    event.args.push_back(*c);
  }
  return Ground(event);
}

GroundEvent Domain::MakeEvent(std::string_view name,
                              std::span<const std::string> args) const {
  auto type = FindEventLoose(name);
  if (!type) {
    throw Error(ErrorCode::kUnknownEventType,
                "unknown event type '" + std::string(name) + "'");
  }
  if (args.size() != events_[*type].arity()) {
    throw Error(ErrorCode::kArityMismatch,
                "event '" + events_[*type].name + "' expects " +
                    std::to_string(events_[*type].arity()) + " args, got " +
                    std::to_string(args.size()));
  }
  GroundEvent event{*type, {}};
  for (const auto& a : args) {
    auto c = FindConstantLoose(a);
    if (!c) {
      throw Error(ErrorCode::kUnknownConstant, "unknown constant '" + a + "'");
    }
    event.args.push_back(*c);
  }
  return event;
}

std::string Domain::Format(const GroundEvent& event) const {
  std::string out = events_.at(event.type).name + "(";
  for (std::size_t i = 0; i < event.args.size(); ++i) {
    if (i) out += ",";
    out += constants_.at(event.args[i]).name;
  }
  return out + ")";
}

std::string Domain::FormatAtom(AtomId atom) const {
  auto [p, args] = DecodeAtom(atom);
  std::string out = predicates_[p].name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += constants_[args[i]].name;
  }
  return out + ")";
}

std::string Domain::FormatState(const BeliefState& state) const {
  if (state.IsTop()) return "TOP";
  std::string out = "{";
  bool first = true;
  for (const auto& [atom, value] : state.assignments()) {
    if (!first) out += ", ";
    first = false;
    if (!value) out += "~";
    out += FormatAtom(atom);
  }
  return out + "}";
}

bool Consistent(const Domain& domain, const BeliefState& state,
                std::span<const Literal> literals) {
  for (const auto& lit : literals) {
    if (lit.atom >= domain.num_atoms()) {
      throw Error(
          ErrorCode::kUnknownPredicate,
          "atom id " + std::to_string(lit.atom) + " is outside the domain");
    }
    auto value = state.Value(lit.atom);
    if (value && *value == lit.negated) return false;
  }
  return true;
}

BeliefState Progress(const Domain& domain, const BeliefState& state,
                     const GroundedEvent& event) {
  if (!Consistent(domain, state, event.preconditions)) {
    return BeliefState::Top();
  }
  BeliefState next = state;
  for (const auto& lit : event.effects) {
    if (!lit.negated) {
      for (AtomId peer : domain.ExclusivePeers(lit.atom)) {
        next.Set(peer, false);
      }
    }
    next.Set(lit.atom, !lit.negated);
  }
  return next;
}

BeliefState Progress(const Domain& domain, const BeliefState& state,
                     const GroundEvent& event) {
  return Progress(domain, state, domain.Ground(event));
}

}  // namespace item
