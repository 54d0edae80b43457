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

#ifndef ITEM_LEARN_HPP_
#define ITEM_LEARN_HPP_

// Iterative self-training of the event scorer: example generation by
// sampling event sequences, lexical initial labels, argmax label updates,
// negative subsampling and L2-regularized logistic regression.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "item/corpus.hpp"
#include "item/features.hpp"
#include "item/logic.hpp"
#include "item/random.hpp"

namespace item {

struct TrainConfig {
  std::size_t n_samples_per_sentence = 10;
  std::size_t edit_distance_threshold = 3;
  // A token only matches an event name when its distance is also at most
  // this fraction of the longer of the two strings.
  double max_edit_ratio = 0.4;
  // Adjacent token pairs are also matched as one word ("free kick").
  bool compound_tokens = true;
  double epsilon = 1e-3;
  std::size_t max_outer_iterations = 50;
  double learning_rate = 0.1;
  double l2_lambda = 1e-3;
  std::size_t max_gd_epochs = 500;
  double gd_tolerance = 1e-6;
  double negative_positive_ratio = 1.0;
  // Subsample negatives separately within each event type.
  bool stratified_balance = true;
  std::uint64_t seed = 0;
  FeatureOptions features{.two_bit_state = false, .event_conjunctions = true};
  // Update-label competitors: every groundable event type for the sentence
  // (true) or only the sampled examples sharing sentence and state (false).
  bool compete_all_types = true;
  // Resampling attempts for an event type that cannot be ground before
  // falling back to Nothing.
  std::size_t grounding_retries = 10;

  // Throws Error(kInvalidConfig).
  void Validate() const;
};

struct TrainingExample {
  BeliefState state;
  std::size_t narrative = 0;
  std::size_t sentence = 0;
  GroundEvent event;
  FeatureVector features;
};

// Case-insensitive Levenshtein distance.
std::size_t Levenshtein(std::string_view a, std::string_view b);

// Smallest edit distance between the event name and any single token,
// ignoring tokens farther than max_ratio * max(|name|, |token|). SIZE_MAX
// when no token qualifies.
std::size_t MinEditDistance(std::string_view event_name,
                            std::span<const std::string> tokens,
                            double max_ratio = 1.0);

// The tokens followed by the concatenation of each adjacent pair.
std::vector<std::string> CompoundTokens(std::span<const std::string> tokens);

// Grounds `type` with the first argument tuple available to a sentence;
// nullopt when too few arguments are available.
std::optional<GroundEvent> GroundFirst(const Domain& domain, EventTypeId type,
                                       std::span<const ConstantId> mentions,
                                       std::optional<ConstantId> previous);

// For each sentence, samples n_samples_per_sentence event sequences over the
// narrative, folds Progress from the top state and emits one example per
// (sequence, sentence). Deterministic in config.seed.
std::vector<TrainingExample> GenerateExamples(
    std::span<const Narrative> narratives, const Domain& domain,
    const FeatureSpace& space, const TrainConfig& config);

// Feasible in `state` and the event name is within `threshold` edits of a
// token. Nothing never qualifies.
bool InitialLabel(const Domain& domain, const BeliefState& state,
                  std::span<const std::string> tokens, const GroundEvent& event,
                  std::size_t threshold, double max_ratio = 1.0);
std::vector<std::uint8_t> InitialLabels(
    std::span<const TrainingExample> examples,
    std::span<const Narrative> narratives, const Domain& domain,
    std::size_t threshold, double max_ratio = 1.0,
    bool compound_tokens = false);

// Logistic of theta . x, with the exponent clamped to [-700, 700]. Throws
// kNonFiniteWeight when the dot product is not finite, kDimensionMismatch on
// size disagreement.
double Score(std::span<const double> theta, const FeatureVector& x);

// Groups examples by (narrative, sentence, state) and marks exactly the
// highest-scoring example of each group. Ties go to the lower event type
// index, then the lexicographically smaller argument list, then the earlier
// example.
std::vector<std::uint8_t> UpdateLabels(
    std::span<const double> theta, std::span<const TrainingExample> examples);

// Marks as positive the example whose event is the highest-scoring event any
// type grounds to for its sentence in its state, among all groundable types
// (ties to the lower type index). Groups whose winner was not sampled have
// no positive.
std::vector<std::uint8_t> UpdateLabelsAllTypes(
    const FeatureSpace& space, std::span<const double> theta,
    std::span<const TrainingExample> examples,
    std::span<const Narrative> narratives, const Domain& domain);

// Keeps every positive and a seeded uniform subset of at most
// ratio * |positives| negatives. Returns ascending example indices. Throws
// kNoPositives.
std::vector<std::size_t> Balance(std::span<const std::uint8_t> labels,
                                 double ratio, Rng& rng);

// Balance applied within each event type. Types without positives keep
// ratio negatives, at least one. Throws kNoPositives when no type has one.
std::vector<std::size_t> StratifiedBalance(
    std::span<const TrainingExample> examples,
    std::span<const std::uint8_t> labels, double ratio, Rng& rng);

// Objective (1/n) sum_i NLL_i + (lambda/2) |theta[1:]|^2 and its gradient.
double LogisticObjective(std::span<const FeatureVector> x,
                         std::span<const std::uint8_t> y,
                         std::span<const double> theta, double lambda);
std::vector<double> LogisticGradient(std::span<const FeatureVector> x,
                                     std::span<const std::uint8_t> y,
                                     std::span<const double> theta,
                                     double lambda);

struct FitResult {
  std::vector<double> theta;
  std::size_t epochs = 0;
  double gradient_norm = 0.0;
  double learning_rate = 0.0;
  double objective = 0.0;
};

// Full-batch accelerated gradient descent from `initial` until the gradient
// norm drops below config.gd_tolerance or config.max_gd_epochs is reached.
// The step size is halved after 10 consecutive objective increases; throws
// kDivergence once it falls below 1e-12.
FitResult FitLogistic(std::span<const FeatureVector> x,
                      std::span<const std::uint8_t> y,
                      const TrainConfig& config, std::vector<double> initial);

struct IterationRecord {
  std::size_t k = 0;
  double delta = 0.0;
  std::optional<double> label_f1;
  std::size_t n_examples = 0;
  std::size_t n_positives = 0;
  std::size_t n_trained = 0;
  std::size_t gd_epochs = 0;
};

struct Model {
  FeatureSpace space;
  std::vector<double> theta;
  std::size_t iterations_run = 0;
  bool converged = false;
  double final_delta = 0.0;
  std::vector<IterationRecord> log;
  TrainConfig config;
};

// Outer hard-EM loop. Label F1 is logged per iteration when every training
// sentence carries a gold event.
Model IterTrain(std::span<const Narrative> narratives, const Domain& domain,
                const TrainConfig& config);

// Model file: {"feature_space": {...}, "theta": [...], "config": {...},
// "iterations": [{"k", "delta", "label_f1"?}], ...}.
void WriteModel(std::ostream& out, const Model& model);
Model ReadModel(std::istream& in, const Domain& domain,
                std::string_view source = "model");
// CSV: iteration,delta,label_f1
void WriteTrainingCurve(std::ostream& out, const Model& model);

}  // namespace item

#endif  // ITEM_LEARN_HPP_
