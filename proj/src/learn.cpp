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

#include "item/learn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "item/error.hpp"
#include "item/eval.hpp"

namespace item {
namespace {

constexpr double kMinLearningRate = 1e-12;
constexpr std::size_t kMaxIncreases = 10;

double Sigmoid(double z) {
  z = std::clamp(z, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(-z));
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void CheckShapes(std::span<const FeatureVector> x,
                 std::span<const std::uint8_t> y,
                 std::span<const double> theta) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature and label counts differ");
  }
  for (const FeatureVector& v : x) {
    if (v.dim != theta.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature dimension " + std::to_string(v.dim) +
                      " != weight dimension " + std::to_string(theta.size()));
    }
  }
}

// Mean regularized objective and its gradient in one pass.
double ObjectiveAndGradient(std::span<const FeatureVector> x,
                            std::span<const std::uint8_t> y,
                            std::span<const double> theta, double lambda,
                            std::vector<double>* grad) {
  const double n = static_cast<double>(x.size());
  double loss = 0.0;
  if (grad != nullptr) grad->assign(theta.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = Dot(theta, x[i]);
    loss += Softplus(z) - (y[i] ? z : 0.0);
    if (grad != nullptr) {
      const double r = (Sigmoid(z) - (y[i] ? 1.0 : 0.0)) / n;
      for (std::uint32_t j : x[i].active) (*grad)[j] += r;
    }
  }
  loss /= n;
  double reg = 0.0;
  for (std::size_t j = 1; j < theta.size(); ++j) {
    reg += theta[j] * theta[j];
    if (grad != nullptr) (*grad)[j] += lambda * theta[j];
  }
  return loss + 0.5 * lambda * reg;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

double Distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool AllGold(std::span<const Narrative> narratives) {
  for (const Narrative& n : narratives) {
    for (const Sentence& s : n.sentences) {
      if (!s.gold) return false;
    }
  }
  return true;
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidConfig, msg);
  };
  if (n_samples_per_sentence == 0) fail("n_samples_per_sentence must be > 0");
  if (!(epsilon > 0)) fail("epsilon must be > 0");
  if (max_outer_iterations == 0) fail("max_outer_iterations must be > 0");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    fail("learning_rate must be a positive finite number");
  }
  if (!(l2_lambda >= 0) || !std::isfinite(l2_lambda)) {
    fail("l2_lambda must be a non-negative finite number");
  }
  if (!(max_edit_ratio >= 0) || !std::isfinite(max_edit_ratio)) {
    fail("max_edit_ratio must be a non-negative finite number");
  }
  if (max_gd_epochs == 0) fail("max_gd_epochs must be > 0");
  if (!(gd_tolerance > 0)) fail("gd_tolerance must be > 0");
  if (!(negative_positive_ratio >= 1) ||
      !std::isfinite(negative_positive_ratio)) {
    fail("negative_positive_ratio must be >= 1");
  }
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  const std::string la = ToLower(a);
  const std::string lb = ToLower(b);
  std::vector<std::size_t> prev(lb.size() + 1);
  std::vector<std::size_t> cur(lb.size() + 1);
  for (std::size_t j = 0; j <= lb.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= la.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= lb.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (la[i - 1] == lb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[lb.size()];
}

std::size_t MinEditDistance(std::string_view event_name,
                            std::span<const std::string> tokens,
                            double max_ratio) {
  std::size_t best = SIZE_MAX;
  for (const std::string& t : tokens) {
    const std::size_t d = Levenshtein(event_name, t);
    const double longest =
        static_cast<double>(std::max(event_name.size(), t.size()));
    if (static_cast<double>(d) > max_ratio * longest) continue;
    best = std::min(best, d);
  }
  return best;
}

std::vector<std::string> CompoundTokens(std::span<const std::string> tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    out.push_back(tokens[i] + tokens[i + 1]);
  }
  return out;
}

std::optional<GroundEvent> GroundFirst(const Domain& domain, EventTypeId type,
                                       std::span<const ConstantId> mentions,
                                       std::optional<ConstantId> previous) {
  const EventSchema& schema = domain.schema(type);
  const std::vector<ConstantId> args =
      ExtractArguments(mentions, previous, schema.arity());
  for (std::vector<ConstantId>& tuple : ArgumentTuples(args, schema.arity())) {
    bool typed = true;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (domain.constants()[tuple[i]].type != schema.params[i].type) {
        typed = false;
        break;
      }
    }
    if (typed) return GroundEvent{type, std::move(tuple)};
  }
  return std::nullopt;
}

std::vector<TrainingExample> GenerateExamples(
    std::span<const Narrative> narratives, const Domain& domain,
    const FeatureSpace& space, const TrainConfig& config) {
  std::vector<TrainingExample> examples;
  const std::size_t n_types = domain.events().size();
  for (std::size_t ni = 0; ni < narratives.size(); ++ni) {
    const Narrative& narrative = narratives[ni];
    const auto carried = CarriedArguments(narrative);
    Rng rng(DeriveSeed(config.seed, "examples/" + std::to_string(ni)));
    // Identical (sentence, state, event) triples are emitted once.
    std::set<std::tuple<std::size_t, BeliefState, GroundEvent>> seen;
    for (std::size_t i = 0; i < config.n_samples_per_sentence; ++i) {
      BeliefState state = BeliefState::Top();
      for (std::size_t t = 0; t < narrative.size(); ++t) {
        const Sentence& sentence = narrative.sentences[t];
        const std::optional<ConstantId> previous = carried[t];
        std::optional<GroundEvent> event;
        for (std::size_t attempt = 0;
             attempt <= config.grounding_retries && !event; ++attempt) {
          const auto type = static_cast<EventTypeId>(rng.UniformIndex(n_types));
          event = GroundFirst(domain, type, sentence.mentions, previous);
        }
        if (!event) event = GroundEvent{domain.nothing(), {}};
        BeliefState next = Progress(domain, state, *event);
        if (seen.emplace(t, state, *event).second) {
          TrainingExample ex;
          ex.features = space.Vectorize(state, sentence.tokens, *event);
          ex.state = std::move(state);
          ex.narrative = ni;
          ex.sentence = t;
          ex.event = *event;
          examples.push_back(std::move(ex));
        }
        state = std::move(next);
      }
    }
  }
  return examples;
}

bool InitialLabel(const Domain& domain, const BeliefState& state,
                  std::span<const std::string> tokens, const GroundEvent& event,
                  std::size_t threshold, double max_ratio) {
  if (event.type == domain.nothing()) return false;
  const GroundedEvent grounded = domain.Ground(event);
  if (!Consistent(domain, state, grounded.preconditions)) return false;
  return MinEditDistance(domain.schema(event.type).name, tokens, max_ratio) <=
         threshold;
}

std::vector<std::uint8_t> InitialLabels(
    std::span<const TrainingExample> examples,
    std::span<const Narrative> narratives, const Domain& domain,
    std::size_t threshold, double max_ratio, bool compound_tokens) {
  std::vector<std::uint8_t> labels(examples.size(), 0);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const TrainingExample& ex = examples[i];
    const Sentence& s = narratives[ex.narrative].sentences[ex.sentence];
    const std::vector<std::string> tokens =
        compound_tokens ? CompoundTokens(s.tokens) : s.tokens;
    labels[i] =
        InitialLabel(domain, ex.state, tokens, ex.event, threshold, max_ratio);
  }
  return labels;
}

double Score(std::span<const double> theta, const FeatureVector& x) {
  if (x.dim != theta.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature dimension " + std::to_string(x.dim) +
                    " != weight dimension " + std::to_string(theta.size()));
  }
  const double z = Dot(theta, x);
  if (!std::isfinite(z)) {
    throw Error(ErrorCode::kNonFiniteWeight, "non-finite score");
  }
  return Sigmoid(z);
}

std::vector<std::uint8_t> UpdateLabels(
    std::span<const double> theta, std::span<const TrainingExample> examples) {
  // Group key: (narrative, sentence, state).
  std::map<std::tuple<std::size_t, std::size_t, BeliefState>, std::size_t> best;
  std::vector<double> scores(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    scores[i] = Score(theta, examples[i].features);
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const TrainingExample& ex = examples[i];
    auto [it, inserted] =
        best.try_emplace({ex.narrative, ex.sentence, ex.state}, i);
    if (inserted) continue;
    const std::size_t j = it->second;
    const TrainingExample& cur = examples[j];
    const bool better =
        scores[i] > scores[j] || (scores[i] == scores[j] &&
                                  std::tie(ex.event.type, ex.event.args) <
                                      std::tie(cur.event.type, cur.event.args));
    if (better) it->second = i;
  }
  std::vector<std::uint8_t> labels(examples.size(), 0);
  for (const auto& [key, index] : best) labels[index] = 1;
  return labels;
}

std::vector<std::uint8_t> UpdateLabelsAllTypes(
    const FeatureSpace& space, std::span<const double> theta,
    std::span<const TrainingExample> examples,
    std::span<const Narrative> narratives, const Domain& domain) {
  std::vector<std::vector<std::optional<ConstantId>>> carried;
  for (const Narrative& n : narratives) carried.push_back(CarriedArguments(n));
  std::map<std::tuple<std::size_t, std::size_t, BeliefState>, GroundEvent>
      winners;
  std::vector<std::uint8_t> labels(examples.size(), 0);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const TrainingExample& ex = examples[i];
    auto key = std::make_tuple(ex.narrative, ex.sentence, ex.state);
    auto it = winners.find(key);
    if (it == winners.end()) {
      const Sentence& s = narratives[ex.narrative].sentences[ex.sentence];
      const std::optional<ConstantId> previous =
          carried[ex.narrative][ex.sentence];
      std::optional<GroundEvent> best;
      double best_score = -1.0;
      for (EventTypeId type = 0; type < domain.events().size(); ++type) {
        std::optional<GroundEvent> e =
            GroundFirst(domain, type, s.mentions, previous);
        if (!e) continue;
        const double score =
            Score(theta, space.Vectorize(ex.state, s.tokens, *e));
        if (score > best_score) {
          best_score = score;
          best = std::move(e);
        }
      }
      it = winners.emplace(std::move(key), *best).first;
    }
    labels[i] = ex.event == it->second;
  }
  return labels;
}

namespace {

// Moves a uniform subset of min(|negatives|, keep) to the front of
// `negatives` by partial Fisher-Yates and returns its size.
std::size_t SampleNegatives(std::vector<std::size_t>& negatives, double cap,
                            Rng& rng) {
  const std::size_t keep =
      std::min(negatives.size(), static_cast<std::size_t>(std::floor(cap)));
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.UniformIndex(negatives.size() - i);
    std::swap(negatives[i], negatives[j]);
  }
  return keep;
}

void CheckRatio(double ratio) {
  if (!(ratio >= 1)) {
    throw Error(ErrorCode::kInvalidConfig, "balance ratio must be >= 1");
  }
}

[[noreturn]] void ThrowNoPositives(std::size_t n) {
  throw Error(ErrorCode::kNoPositives,
              "no positive labels among " + std::to_string(n) + " examples");
}

}  // namespace

std::vector<std::size_t> Balance(std::span<const std::uint8_t> labels,
                                 double ratio, Rng& rng) {
  CheckRatio(ratio);
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] ? positives : negatives).push_back(i);
  }
  if (positives.empty()) ThrowNoPositives(labels.size());
  const std::size_t keep = SampleNegatives(
      negatives, ratio * static_cast<double>(positives.size()), rng);
  std::vector<std::size_t> out = std::move(positives);
  out.insert(out.end(), negatives.begin(), negatives.begin() + keep);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> StratifiedBalance(
    std::span<const TrainingExample> examples,
    std::span<const std::uint8_t> labels, double ratio, Rng& rng) {
  CheckRatio(ratio);
  if (examples.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "examples and labels differ in length");
  }
  std::map<EventTypeId,
           std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
      by_type;
  bool any_positive = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [pos, neg] = by_type[examples[i].event.type];
    (labels[i] ? pos : neg).push_back(i);
    any_positive = any_positive || labels[i];
  }
  if (!any_positive) ThrowNoPositives(labels.size());
  std::vector<std::size_t> out;
  for (auto& [type, group] : by_type) {
    auto& [pos, neg] = group;
    const double base =
        static_cast<double>(std::max<std::size_t>(1, pos.size()));
    const std::size_t keep = SampleNegatives(neg, ratio * base, rng);
    out.insert(out.end(), pos.begin(), pos.end());
    out.insert(out.end(), neg.begin(), neg.begin() + keep);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double LogisticObjective(std::span<const FeatureVector> x,
                         std::span<const std::uint8_t> y,
                         std::span<const double> theta, double lambda) {
  CheckShapes(x, y, theta);
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "no examples");
  return ObjectiveAndGradient(x, y, theta, lambda, nullptr);
}

std::vector<double> LogisticGradient(std::span<const FeatureVector> x,
                                     std::span<const std::uint8_t> y,
                                     std::span<const double> theta,
                                     double lambda) {
  CheckShapes(x, y, theta);
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "no examples");
  std::vector<double> grad;
  ObjectiveAndGradient(x, y, theta, lambda, &grad);
  return grad;
}

FitResult FitLogistic(std::span<const FeatureVector> x,
                      std::span<const std::uint8_t> y,
                      const TrainConfig& config, std::vector<double> initial) {
  CheckShapes(x, y, initial);
  if (x.empty()) throw Error(ErrorCode::kInvalidArgument, "no examples");
  const double lambda = config.l2_lambda;
  FitResult result;
  double lr = config.learning_rate;
  std::vector<double> theta = std::move(initial);
  std::vector<double> grad;
  double f = ObjectiveAndGradient(x, y, theta, lambda, &grad);
  double gnorm = Norm(grad);
  std::vector<double> previous = theta;
  std::vector<double> look(theta.size());
  std::vector<double> look_grad;
  std::vector<double> next(theta.size());
  std::vector<double> next_grad;
  double momentum_t = 1.0;
  std::size_t increases = 0;
  std::size_t epoch = 0;
  while (epoch < config.max_gd_epochs && gnorm >= config.gd_tolerance) {
    ++epoch;
    const double t_next =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
    const double beta = (momentum_t - 1.0) / t_next;
    const std::vector<double>* g = &grad;
    if (beta > 0) {
      for (std::size_t j = 0; j < theta.size(); ++j) {
        look[j] = theta[j] + beta * (theta[j] - previous[j]);
      }
      ObjectiveAndGradient(x, y, look, lambda, &look_grad);
      g = &look_grad;
    } else {
      look = theta;
    }
    for (std::size_t j = 0; j < theta.size(); ++j) {
      next[j] = look[j] - lr * (*g)[j];
    }
    const double f_next = ObjectiveAndGradient(x, y, next, lambda, &next_grad);
    if (!std::isfinite(f_next)) {
      lr *= 0.5;
      momentum_t = 1.0;
      if (lr < kMinLearningRate) {
        throw Error(ErrorCode::kDivergence, "learning rate floor reached");
      }
      continue;
    }
    if (f_next > f) {
      momentum_t = 1.0;
      if (++increases >= kMaxIncreases) {
        increases = 0;
        lr *= 0.5;
        if (lr < kMinLearningRate) {
          throw Error(ErrorCode::kDivergence, "learning rate floor reached");
        }
      }
    } else {
      increases = 0;
      momentum_t = t_next;
    }
    previous.swap(theta);
    theta.swap(next);
    grad.swap(next_grad);
    f = f_next;
    gnorm = Norm(grad);
  }
  for (double w : theta) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kNonFiniteWeight, "non-finite weight after fit");
    }
  }
  result.theta = std::move(theta);
  result.epochs = epoch;
  result.gradient_norm = gnorm;
  result.learning_rate = lr;
  result.objective = f;
  return result;
}

Model IterTrain(std::span<const Narrative> narratives, const Domain& domain,
                const TrainConfig& config) {
  config.Validate();
  Model model;
  model.config = config;
  model.space = FeatureSpace::Build(narratives, domain, config.features);
  const std::size_t dim = model.space.dim();
  Rng init(DeriveSeed(config.seed, "theta/init"));
  std::vector<double> theta(dim);
  for (double& w : theta) w = init.Uniform(-0.01, 0.01);
  const bool gold = AllGold(narratives);

  for (std::size_t k = 1; k <= config.max_outer_iterations; ++k) {
    const std::vector<TrainingExample> examples =
        GenerateExamples(narratives, domain, model.space, config);
    const std::vector<std::uint8_t> labels =
        k == 1 ? InitialLabels(examples, narratives, domain,
                               config.edit_distance_threshold,
                               config.max_edit_ratio, config.compound_tokens)
        : config.compete_all_types
            ? UpdateLabelsAllTypes(model.space, theta, examples, narratives,
                                   domain)
            : UpdateLabels(theta, examples);
    IterationRecord record;
    record.k = k;
    record.n_examples = examples.size();
    record.n_positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (gold) record.label_f1 = LabelF1(examples, labels, narratives);

    Rng balance_rng(DeriveSeed(config.seed, "balance"));
    const std::vector<std::size_t> keep =
        config.stratified_balance
            ? StratifiedBalance(examples, labels,
                                config.negative_positive_ratio, balance_rng)
            : Balance(labels, config.negative_positive_ratio, balance_rng);
    std::vector<FeatureVector> x;
    std::vector<std::uint8_t> y;
    x.reserve(keep.size());
    y.reserve(keep.size());
    for (std::size_t i : keep) {
      x.push_back(examples[i].features);
      y.push_back(labels[i]);
    }
    record.n_trained = keep.size();
    FitResult fit = FitLogistic(x, y, config, theta);
    record.gd_epochs = fit.epochs;
    record.delta = Distance(fit.theta, theta);
    theta = std::move(fit.theta);
    model.log.push_back(record);
    model.iterations_run = k;
    model.final_delta = record.delta;
    if (record.delta < config.epsilon) {
      model.converged = true;
      break;
    }
  }
  model.theta = std::move(theta);
  return model;
}

}  // namespace item
