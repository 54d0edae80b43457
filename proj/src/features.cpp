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

#include "item/features.hpp"

#include <algorithm>
#include <set>

#include "item/error.hpp"

namespace item {

FeatureSpace::FeatureSpace(const Domain& domain,
                           std::vector<std::string> vocabulary,
                           FeatureOptions options)
    : vocabulary_(std::move(vocabulary)), options_(options) {
  for (const auto& e : domain.events()) event_types_.push_back(e.name);
  for (AtomId atom : domain.tracked_atoms()) {
    ground_predicates_.push_back(domain.FormatAtom(atom));
    atoms_.push_back(atom);
  }
  Index(domain);
}

FeatureSpace::FeatureSpace(const Domain& domain,
                           std::vector<std::string> event_types,
                           std::vector<std::string> vocabulary,
                           std::vector<std::string> ground_predicates,
                           FeatureOptions options)
    : event_types_(std::move(event_types)),
      vocabulary_(std::move(vocabulary)),
      ground_predicates_(std::move(ground_predicates)),
      options_(options) {
  std::unordered_map<std::string, AtomId> by_name;
  for (AtomId atom : domain.tracked_atoms()) {
    by_name.emplace(domain.FormatAtom(atom), atom);
  }
  for (const auto& name : ground_predicates_) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "ground predicate '" + name + "' is not in the domain");
    }
    atoms_.push_back(it->second);
  }
  for (const auto& name : event_types_) {
    if (!domain.FindEvent(name)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "event type '" + name + "' is not in the domain");
    }
  }
  Index(domain);
}

void FeatureSpace::Index(const Domain& domain) {
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    word_index_.emplace(vocabulary_[i], i);
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    atom_index_.emplace(atoms_[i], i);
  }
  event_index_.assign(domain.events().size(), -1);
  for (std::size_t i = 0; i < event_types_.size(); ++i) {
    event_index_[*domain.FindEvent(event_types_[i])] =
        static_cast<std::int64_t>(i);
  }
}

FeatureSpace FeatureSpace::Build(std::span<const Narrative> narratives,
                                 const Domain& domain, FeatureOptions options) {
  std::set<std::string> words;
  std::size_t sentences = 0;
  for (const auto& n : narratives) {
    for (const auto& s : n.sentences) {
      ++sentences;
      words.insert(s.tokens.begin(), s.tokens.end());
    }
  }
  if (sentences == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "training corpus has no sentences");
  }
  return FeatureSpace(
      domain, std::vector<std::string>(words.begin(), words.end()), options);
}

std::optional<std::size_t> FeatureSpace::WordSlot(
    const std::string& token) const {
  auto it = word_index_.find(token);
  if (it == word_index_.end()) return std::nullopt;
  return word_offset() + it->second;
}

std::optional<std::size_t> FeatureSpace::EventSlot(EventTypeId type) const {
  if (type >= event_index_.size() || event_index_[type] < 0) {
    return std::nullopt;
  }
  return event_offset() + static_cast<std::size_t>(event_index_[type]);
}

FeatureVector FeatureSpace::Vectorize(const BeliefState& state,
                                      std::span<const std::string> tokens,
                                      const GroundEvent& event) const {
  auto event_slot = EventSlot(event.type);
  if (!event_slot) {
    throw Error(ErrorCode::kDimensionMismatch,
                "event type id " + std::to_string(event.type) +
                    " has no slot in the feature space");
  }
  FeatureVector x;
  x.dim = dim();
  // Base slots other than bias and event, relative to state_offset().
  std::vector<std::uint32_t> shared;
  for (const auto& [atom, value] : state.assignments()) {
    auto it = atom_index_.find(atom);
    if (it == atom_index_.end()) continue;
    if (options_.two_bit_state) {
      shared.push_back(
          static_cast<std::uint32_t>(2 * it->second + (value ? 0 : 1)));
    } else if (value) {
      shared.push_back(static_cast<std::uint32_t>(it->second));
    }
  }
  for (const auto& tok : tokens) {
    if (auto slot = WordSlot(tok)) {
      shared.push_back(static_cast<std::uint32_t>(*slot - state_offset()));
    }
  }
  x.active.push_back(0);
  for (std::uint32_t r : shared) {
    x.active.push_back(static_cast<std::uint32_t>(state_offset() + r));
  }
  x.active.push_back(static_cast<std::uint32_t>(*event_slot));
  if (options_.event_conjunctions) {
    const std::size_t block =
        conjunction_offset() +
        (*event_slot - event_offset()) * conjunction_width();
    for (std::uint32_t r : shared) {
      x.active.push_back(static_cast<std::uint32_t>(block + r));
    }
  }
  std::sort(x.active.begin(), x.active.end());
  x.active.erase(std::unique(x.active.begin(), x.active.end()), x.active.end());
  return x;
}

}  // namespace item
