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

#ifndef ITEM_FEATURES_HPP_
#define ITEM_FEATURES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "item/corpus.hpp"
#include "item/logic.hpp"

namespace item {

// Sparse binary feature vector: sorted indices of the slots set to 1.
struct FeatureVector {
  std::vector<std::uint32_t> active;
  std::size_t dim = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct FeatureOptions {
  // Second state slot per ground predicate, set when it is known false.
  bool two_bit_state = false;
  // Adds one copy of the state and word slots per event type, active only
  // for that type.
  bool event_conjunctions = false;

  friend bool operator==(const FeatureOptions&,
                         const FeatureOptions&) = default;
};

// Slot layout: [bias | state | words | event types | conjunctions].
//
// State slots hold one entry per tracked ground predicate (true -> 1; false
// and unknown -> 0). The conjunction block is empty unless
// event_conjunctions is set; it then holds, per event type, a copy of the
// state and word slots.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  FeatureSpace(const Domain& domain, std::vector<std::string> vocabulary,
               FeatureOptions options = {});
  // Rebuilds a space from stored slot tables. Throws kDimensionMismatch if a
  // stored name does not resolve against `domain`.
  FeatureSpace(const Domain& domain, std::vector<std::string> event_types,
               std::vector<std::string> vocabulary,
               std::vector<std::string> ground_predicates,
               FeatureOptions options);

  // Vocabulary = every token of `narratives`. Throws kEmptyCorpus.
  static FeatureSpace Build(std::span<const Narrative> narratives,
                            const Domain& domain, FeatureOptions options = {});

  std::size_t dim() const {
    return conjunction_offset() +
           (options_.event_conjunctions
                ? event_types_.size() * conjunction_width()
                : 0);
  }
  std::size_t state_width() const {
    return ground_predicates_.size() * (options_.two_bit_state ? 2 : 1);
  }
  std::size_t state_offset() const { return 1; }
  std::size_t word_offset() const { return 1 + state_width(); }
  std::size_t event_offset() const {
    return word_offset() + vocabulary_.size();
  }
  std::size_t conjunction_offset() const {
    return event_offset() + event_types_.size();
  }
  // Slots per event type in the conjunction block.
  std::size_t conjunction_width() const {
    return state_width() + vocabulary_.size();
  }

  std::optional<std::size_t> WordSlot(const std::string& token) const;
  std::optional<std::size_t> EventSlot(EventTypeId type) const;

  const std::vector<std::string>& event_types() const { return event_types_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& ground_predicates() const {
    return ground_predicates_;
  }
  const FeatureOptions& options() const { return options_; }
  bool two_bit_state() const { return options_.two_bit_state; }

  // Parallel to ground_predicates().
  const std::vector<AtomId>& atoms() const { return atoms_; }

  // Feature vector of (state, sentence tokens, event). Out-of-vocabulary
  // tokens are ignored. Throws kDimensionMismatch for an event type unknown
  // to the space.
  FeatureVector Vectorize(const BeliefState& state,
                          std::span<const std::string> tokens,
                          const GroundEvent& event) const;

 private:
  void Index(const Domain& domain);

  std::vector<std::string> event_types_;
  std::vector<std::string> vocabulary_;
  std::vector<std::string> ground_predicates_;
  std::vector<AtomId> atoms_;
  FeatureOptions options_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::unordered_map<AtomId, std::size_t> atom_index_;
  // Domain event id -> position in event_types_, or -1.
  std::vector<std::int64_t> event_index_;
};

template <typename Weights>
double Dot(const Weights& theta, const FeatureVector& x) {
  double sum = 0.0;
  for (std::uint32_t i : x.active) sum += theta[i];
  return sum;
}

}  // namespace item

#endif  // ITEM_FEATURES_HPP_
