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

#ifndef ITEM_DECODE_HPP_
#define ITEM_DECODE_HPP_

// Candidate enumeration, normalized scoring and state-tracking sequence
// decoding, plus the exhaustive oracle and the baseline decoders.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "item/corpus.hpp"
#include "item/learn.hpp"
#include "item/logic.hpp"
#include "item/random.hpp"

namespace item {

struct Candidate {
  GroundEvent event;
  double raw_score = 0.0;
  double norm_score = 0.0;
};

struct PenaltyConfig {
  double r_infeasible = -1.0;
  // Hypotheses kept per trellis cell. 1 keeps a single predecessor state.
  std::size_t beam_width = 1;

  // Throws Error(kInvalidConfig).
  void Validate() const;
};

// Every event type ground with every admissible ordered argument tuple, in
// type order then tuple order, duplicates removed; types whose arity cannot
// be met are dropped. Always contains Nothing().
std::vector<GroundEvent> CandidateEvents(const Domain& domain,
                                         std::span<const ConstantId> mentions,
                                         std::optional<ConstantId> previous);
std::vector<GroundEvent> CandidateEvents(const Domain& domain,
                                         const Narrative& narrative,
                                         std::size_t index);

// Raw score of an event for a sentence in a state.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double Raw(const BeliefState& state, const Sentence& sentence,
                     const GroundEvent& event) const = 0;
};

class ModelScorer : public Scorer {
 public:
  explicit ModelScorer(const Model& model) : model_(model) {}
  double Raw(const BeliefState& state, const Sentence& sentence,
             const GroundEvent& event) const override;

 private:
  const Model& model_;
};

class UniformScorer : public Scorer {
 public:
  double Raw(const BeliefState&, const Sentence&,
             const GroundEvent&) const override {
    return 1.0;
  }
};

// Candidates of sentence `index` with raw scores in `state` when a model is
// given, normalized.
std::vector<Candidate> Candidates(const Domain& domain,
                                  const Narrative& narrative, std::size_t index,
                                  const Model* model,
                                  const BeliefState& state = BeliefState());

// norm = raw / sum(raw). A zero total yields uniform scores.
std::vector<Candidate> Normalize(std::vector<Candidate> candidates);

struct DecodeResult {
  std::vector<GroundEvent> events;
  // Per sentence: normalized score of the chosen event in its predecessor
  // state, whether it was infeasible there, and the state after it.
  std::vector<double> norm_scores;
  std::vector<bool> penalized;
  std::vector<BeliefState> states;
  double utility = 0.0;
};

using CandidateSets = std::vector<std::vector<GroundEvent>>;

CandidateSets AllCandidates(const Domain& domain, const Narrative& narrative);

// Trellis decoding over the given per-sentence candidate sets. Throws
// kEmptyNarrative; kInvalidArgument when a set is empty or the set count
// differs from the narrative length.
DecodeResult Viterbi(const Domain& domain, const Narrative& narrative,
                     const CandidateSets& candidates, const Scorer& scorer,
                     const PenaltyConfig& penalty);
DecodeResult Viterbi(const Narrative& narrative, const Model& model,
                     const Domain& domain, const PenaltyConfig& penalty);

inline constexpr double kMaxExhaustiveSequences = 1e6;

// Enumerates every sequence; ties go to the earliest sequence in candidate
// order. Throws kTooLarge beyond kMaxExhaustiveSequences sequences.
DecodeResult ExhaustiveDecode(const Domain& domain, const Narrative& narrative,
                              const CandidateSets& candidates,
                              const Scorer& scorer,
                              const PenaltyConfig& penalty);
DecodeResult ExhaustiveDecode(const Narrative& narrative, const Model& model,
                              const Domain& domain,
                              const PenaltyConfig& penalty);

double SequenceSpace(const CandidateSets& candidates);

// Left-to-right re-fold of a sequence: sum of normalized scores plus
// penalties, progressing from the top state.
DecodeResult EvaluateSequence(const Domain& domain, const Narrative& narrative,
                              const CandidateSets& candidates,
                              const Scorer& scorer,
                              const PenaltyConfig& penalty,
                              std::span<const GroundEvent> events);

enum class BaselineKind { kB0, kB1a, kB1b, kB2a, kB2b, kB3 };

inline constexpr BaselineKind kAllBaselines[] = {
    BaselineKind::kB0,  BaselineKind::kB1a, BaselineKind::kB1b,
    BaselineKind::kB2a, BaselineKind::kB2b, BaselineKind::kB3};

// "b0", "b1a", ...; parsing is case-insensitive. Throws kInvalidArgument.
std::string_view BaselineName(BaselineKind kind);
std::string_view BaselineLabel(BaselineKind kind);  // "Baseline-0", ...
BaselineKind ParseBaseline(std::string_view name);

struct BaselineOptions {
  std::size_t edit_distance_threshold = 3;
  // Same meaning as TrainConfig::max_edit_ratio.
  double max_edit_ratio = 0.4;
  bool compound_tokens = true;
  // B3 combines the two filters by union instead of intersection.
  bool b3_union = false;
  PenaltyConfig penalty;
};

// Types within the edit-distance threshold of some token.
std::vector<EventTypeId> SimilarTypes(const Domain& domain,
                                      const Sentence& sentence,
                                      std::size_t threshold,
                                      double max_ratio = 1.0,
                                      bool compound_tokens = false);
// Types whose arity equals the number of mentioned players.
std::vector<EventTypeId> SameArityTypes(const Domain& domain,
                                        const Sentence& sentence);

// Grounds a type for a baseline: the first typed tuple of extracted
// arguments, padded from the roster when too few are available.
GroundEvent GroundPadded(const Domain& domain, EventTypeId type,
                         std::span<const ConstantId> mentions,
                         std::optional<ConstantId> previous);

std::vector<GroundEvent> Baseline(BaselineKind kind, const Narrative& narrative,
                                  const Domain& domain, Rng& rng,
                                  const BaselineOptions& options = {});

// JSON lines: one record per sentence, then a footer with the utility.
void WriteDecode(std::ostream& out, const Domain& domain,
                 const Narrative& narrative, const DecodeResult& result,
                 std::optional<double> oracle_utility = std::nullopt);

}  // namespace item

#endif  // ITEM_DECODE_HPP_
