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

#ifndef ITEM_SIMULATOR_HPP_
#define ITEM_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "item/corpus.hpp"
#include "item/logic.hpp"

namespace item {

// Sentence templates use three kinds of slots:
//   {a0}, {a1}, ...   the event's arguments, rendered by constant name
//   {he}              a pronoun standing in for {a0}; only chosen when a0 is
//                     the argument carried over from the previous sentence
//   {x|y|z}           a seeded choice among synonyms
struct SimulatorConfig {
  std::size_t n_sentences = 50;
  double p_nothing = 0.1;
  double p_miss = 0.05;
  std::uint64_t seed = 1;
  // Event type name -> templates. "Nothing" holds the filler sentences.
  std::map<std::string, std::vector<std::string>> templates;
  // Relative frequency of each event type; missing types weigh 1.
  std::map<std::string, double> type_weights;

  // Throws Error(kInvalidConfig).
  void Validate(const Domain& domain) const;
};

// Templates and type frequencies for the bundled soccer domain.
SimulatorConfig DefaultSimulatorConfig();

struct TraceStep {
  GroundEvent event;
  // Sentence index when the event was narrated; nullopt for a missed event.
  std::optional<std::size_t> sentence;
  BeliefState state_before;
  BeliefState state_after;
};

struct SyntheticGame {
  Narrative narrative;
  std::vector<TraceStep> trace;
};

// Simulates one game: repeatedly picks an event type (weighted, among types
// with a feasible grounding in the hidden state), a feasible grounding
// uniformly, progresses the hidden state and narrates the event. Filler
// sentences (gold Nothing) appear with probability p_nothing; events are
// silently dropped with probability p_miss.
SyntheticGame GenerateSynthetic(const Domain& domain,
                                const SimulatorConfig& config,
                                std::string game_id = "synthetic");

// n_games games with ids "<prefix>1".."<prefix>N", per-game seeds derived
// from config.seed.
std::vector<SyntheticGame> GenerateGames(const Domain& domain,
                                         const SimulatorConfig& config,
                                         std::size_t n_games,
                                         const std::string& prefix = "game");

}  // namespace item

#endif  // ITEM_SIMULATOR_HPP_
