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

#include "item/decode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "item/error.hpp"
#include "json.hpp"

namespace item {
namespace {

using nlohmann::ordered_json;

struct Hypothesis {
  double v = 0.0;
  BeliefState state;
  std::size_t prev_cell = 0;
  std::size_t prev_hyp = 0;
  double norm = 0.0;
  bool penalized = false;
};

// Normalized scores of one candidate set, cached per predecessor state.
class NormCache {
 public:
  NormCache(const Sentence& sentence, const std::vector<GroundEvent>& events,
            const Scorer& scorer)
      : sentence_(sentence), events_(events), scorer_(scorer) {}

  const std::vector<double>& Get(const BeliefState& state) {
    auto it = cache_.find(state);
    if (it != cache_.end()) return it->second;
    std::vector<double> raw(events_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < events_.size(); ++i) {
      raw[i] = scorer_.Raw(state, sentence_, events_[i]);
      total += raw[i];
    }
    for (double& r : raw) {
      r = total > 0 ? r / total : 1.0 / static_cast<double>(events_.size());
    }
    return cache_.emplace(state, std::move(raw)).first->second;
  }

 private:
  const Sentence& sentence_;
  const std::vector<GroundEvent>& events_;
  const Scorer& scorer_;
  std::map<BeliefState, std::vector<double>> cache_;
};

// Grounded candidates, shared by the decoders.
std::vector<std::vector<GroundedEvent>> GroundAll(
    const Domain& domain, const CandidateSets& candidates) {
  std::vector<std::vector<GroundedEvent>> out(candidates.size());
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    for (const GroundEvent& e : candidates[t]) {
      out[t].push_back(domain.Ground(e));
    }
  }
  return out;
}

void CheckInputs(const Narrative& narrative, const CandidateSets& candidates) {
  if (narrative.size() == 0) {
    throw Error(ErrorCode::kEmptyNarrative,
                "narrative '" + narrative.id + "' has no sentences");
  }
  if (candidates.size() != narrative.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate set count differs from narrative length");
  }
  for (const auto& set : candidates) {
    if (set.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty candidate set");
    }
  }
}

}  // namespace

void PenaltyConfig::Validate() const {
  if (!(r_infeasible <= 0 && r_infeasible >= -1)) {
    throw Error(ErrorCode::kInvalidConfig, "r_infeasible must be in [-1, 0]");
  }
  if (beam_width == 0) {
    throw Error(ErrorCode::kInvalidConfig, "beam_width must be >= 1");
  }
}

std::vector<GroundEvent> CandidateEvents(const Domain& domain,
                                         std::span<const ConstantId> mentions,
                                         std::optional<ConstantId> previous) {
  std::vector<GroundEvent> out;
  std::set<GroundEvent> seen;
  for (EventTypeId type = 0; type < domain.events().size(); ++type) {
    const EventSchema& schema = domain.schema(type);
    const std::vector<ConstantId> args =
        ExtractArguments(mentions, previous, schema.arity());
    for (auto& tuple : ArgumentTuples(args, schema.arity())) {
      bool typed = true;
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        typed =
            typed && domain.constants()[tuple[i]].type == schema.params[i].type;
      }
      if (!typed) continue;
      GroundEvent e{type, std::move(tuple)};
      if (seen.insert(e).second) out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<GroundEvent> CandidateEvents(const Domain& domain,
                                         const Narrative& narrative,
                                         std::size_t index) {
  const auto carried = CarriedArguments(narrative);
  return CandidateEvents(domain, narrative.sentences.at(index).mentions,
                         carried[index]);
}

CandidateSets AllCandidates(const Domain& domain, const Narrative& narrative) {
  const auto carried = CarriedArguments(narrative);
  CandidateSets out;
  for (std::size_t t = 0; t < narrative.size(); ++t) {
    out.push_back(
        CandidateEvents(domain, narrative.sentences[t].mentions, carried[t]));
  }
  return out;
}

double ModelScorer::Raw(const BeliefState& state, const Sentence& sentence,
                        const GroundEvent& event) const {
  return Score(model_.theta,
               model_.space.Vectorize(state, sentence.tokens, event));
}

std::vector<Candidate> Normalize(std::vector<Candidate> candidates) {
  double total = 0.0;
  for (const Candidate& c : candidates) total += c.raw_score;
  for (Candidate& c : candidates) {
    c.norm_score = total > 0 ? c.raw_score / total
                             : 1.0 / static_cast<double>(candidates.size());
  }
  return candidates;
}

std::vector<Candidate> Candidates(const Domain& domain,
                                  const Narrative& narrative, std::size_t index,
                                  const Model* model,
                                  const BeliefState& state) {
  std::vector<Candidate> out;
  const Sentence& sentence = narrative.sentences.at(index);
  for (GroundEvent& e : CandidateEvents(domain, narrative, index)) {
    Candidate c;
    c.raw_score =
        model != nullptr ? ModelScorer(*model).Raw(state, sentence, e) : 1.0;
    c.event = std::move(e);
    out.push_back(std::move(c));
  }
  return Normalize(std::move(out));
}

double SequenceSpace(const CandidateSets& candidates) {
  double total = 1.0;
  for (const auto& set : candidates) total *= static_cast<double>(set.size());
  return total;
}

DecodeResult Viterbi(const Domain& domain, const Narrative& narrative,
                     const CandidateSets& candidates, const Scorer& scorer,
                     const PenaltyConfig& penalty) {
  penalty.Validate();
  CheckInputs(narrative, candidates);
  const auto grounded = GroundAll(domain, candidates);
  const std::size_t T = narrative.size();
  // cells[t][i]: hypotheses ending in candidate i at sentence t, best first.
  std::vector<std::vector<std::vector<Hypothesis>>> cells(T);

  {
    NormCache norms(narrative.sentences[0], candidates[0], scorer);
    const BeliefState top = BeliefState::Top();
    const std::vector<double>& p = norms.Get(top);
    cells[0].resize(candidates[0].size());
    for (std::size_t i = 0; i < candidates[0].size(); ++i) {
      const bool feasible =
          Consistent(domain, top, grounded[0][i].preconditions);
      Hypothesis h;
      h.norm = p[i];
      h.penalized = !feasible;
      h.v = p[i] + 0.0 + (feasible ? 0.0 : penalty.r_infeasible);
      h.state = Progress(domain, top, grounded[0][i]);
      cells[0][i].push_back(std::move(h));
    }
  }

  for (std::size_t t = 1; t < T; ++t) {
    NormCache norms(narrative.sentences[t], candidates[t], scorer);
    const std::size_t n = candidates[t].size();
    std::vector<std::vector<Hypothesis>> next(n);
    for (std::size_t j = 0; j < cells[t - 1].size(); ++j) {
      for (std::size_t hj = 0; hj < cells[t - 1][j].size(); ++hj) {
        const Hypothesis& prev = cells[t - 1][j][hj];
        const std::vector<double>& p = norms.Get(prev.state);
        for (std::size_t i = 0; i < n; ++i) {
          const bool feasible =
              Consistent(domain, prev.state, grounded[t][i].preconditions);
          const double v =
              p[i] + prev.v + (feasible ? 0.0 : penalty.r_infeasible);
          std::vector<Hypothesis>& cell = next[i];
          // Strictly better hypotheses displace; ties keep the earlier one.
          auto pos = std::find_if(cell.begin(), cell.end(),
                                  [v](const Hypothesis& h) { return v > h.v; });
          if (pos == cell.end() && cell.size() >= penalty.beam_width) continue;
          Hypothesis h;
          h.v = v;
          h.prev_cell = j;
          h.prev_hyp = hj;
          h.norm = p[i];
          h.penalized = !feasible;
          pos = cell.insert(pos, std::move(h));
          if (cell.size() > penalty.beam_width) cell.pop_back();
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (Hypothesis& h : next[i]) {
        h.state = Progress(domain, cells[t - 1][h.prev_cell][h.prev_hyp].state,
                           grounded[t][i]);
      }
    }
    cells[t] = std::move(next);
  }

  std::size_t best_cell = 0;
  for (std::size_t i = 1; i < cells[T - 1].size(); ++i) {
    if (cells[T - 1][i].front().v > cells[T - 1][best_cell].front().v) {
      best_cell = i;
    }
  }
  DecodeResult result;
  result.events.resize(T);
  result.norm_scores.resize(T);
  result.penalized.resize(T);
  result.states.resize(T);
  result.utility = cells[T - 1][best_cell].front().v;
  std::size_t cell = best_cell;
  std::size_t hyp = 0;
  for (std::size_t t = T; t-- > 0;) {
    const Hypothesis& h = cells[t][cell][hyp];
    result.events[t] = candidates[t][cell];
    result.norm_scores[t] = h.norm;
    result.penalized[t] = h.penalized;
    result.states[t] = h.state;
    cell = h.prev_cell;
    hyp = h.prev_hyp;
  }
  return result;
}

DecodeResult Viterbi(const Narrative& narrative, const Model& model,
                     const Domain& domain, const PenaltyConfig& penalty) {
  if (narrative.size() == 0) {
    throw Error(ErrorCode::kEmptyNarrative,
                "narrative '" + narrative.id + "' has no sentences");
  }
  return Viterbi(domain, narrative, AllCandidates(domain, narrative),
                 ModelScorer(model), penalty);
}

DecodeResult EvaluateSequence(const Domain& domain, const Narrative& narrative,
                              const CandidateSets& candidates,
                              const Scorer& scorer,
                              const PenaltyConfig& penalty,
                              std::span<const GroundEvent> events) {
  CheckInputs(narrative, candidates);
  if (events.size() != narrative.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "sequence length differs from narrative length");
  }
  DecodeResult result;
  BeliefState state = BeliefState::Top();
  double v = 0.0;
  for (std::size_t t = 0; t < events.size(); ++t) {
    const auto& set = candidates[t];
    const auto it = std::find(set.begin(), set.end(), events[t]);
    if (it == set.end()) {
      throw Error(
          ErrorCode::kInvalidArgument,
          "event at position " + std::to_string(t) + " is not a candidate");
    }
    NormCache norms(narrative.sentences[t], set, scorer);
    const double p = norms.Get(state)[it - set.begin()];
    const GroundedEvent g = domain.Ground(events[t]);
    const bool feasible = Consistent(domain, state, g.preconditions);
    v = p + v + (feasible ? 0.0 : penalty.r_infeasible);
    state = Progress(domain, state, g);
    result.events.push_back(events[t]);
    result.norm_scores.push_back(p);
    result.penalized.push_back(!feasible);
    result.states.push_back(state);
  }
  result.utility = v;
  return result;
}

DecodeResult ExhaustiveDecode(const Domain& domain, const Narrative& narrative,
                              const CandidateSets& candidates,
                              const Scorer& scorer,
                              const PenaltyConfig& penalty) {
  penalty.Validate();
  CheckInputs(narrative, candidates);
  const double space = SequenceSpace(candidates);
  if (space > kMaxExhaustiveSequences) {
    throw Error(ErrorCode::kTooLarge, "exhaustive decoding over " +
                                          std::to_string(space) +
                                          " sequences exceeds the limit");
  }
  const auto grounded = GroundAll(domain, candidates);
  const std::size_t T = narrative.size();
  std::vector<NormCache> norms;
  norms.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    norms.emplace_back(narrative.sentences[t], candidates[t], scorer);
  }
  std::vector<std::size_t> path(T);
  std::vector<std::size_t> best_path;
  double best = -INFINITY;
  std::function<void(std::size_t, const BeliefState&, double)> walk =
      [&](std::size_t t, const BeliefState& state, double v) {
        const std::vector<double>& p = norms[t].Get(state);
        for (std::size_t i = 0; i < candidates[t].size(); ++i) {
          const bool feasible =
              Consistent(domain, state, grounded[t][i].preconditions);
          const double u = p[i] + v + (feasible ? 0.0 : penalty.r_infeasible);
          path[t] = i;
          if (t + 1 == T) {
            if (u > best) {
              best = u;
              best_path = path;
            }
          } else {
            walk(t + 1, Progress(domain, state, grounded[t][i]), u);
          }
        }
      };
  walk(0, BeliefState::Top(), 0.0);
  std::vector<GroundEvent> events;
  for (std::size_t t = 0; t < T; ++t) {
    events.push_back(candidates[t][best_path[t]]);
  }
  return EvaluateSequence(domain, narrative, candidates, scorer, penalty,
                          events);
}

DecodeResult ExhaustiveDecode(const Narrative& narrative, const Model& model,
                              const Domain& domain,
                              const PenaltyConfig& penalty) {
  if (narrative.size() == 0) {
    throw Error(ErrorCode::kEmptyNarrative,
                "narrative '" + narrative.id + "' has no sentences");
  }
  return ExhaustiveDecode(domain, narrative, AllCandidates(domain, narrative),
                          ModelScorer(model), penalty);
}

std::string_view BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kB0:
      return "b0";
    case BaselineKind::kB1a:
      return "b1a";
    case BaselineKind::kB1b:
      return "b1b";
    case BaselineKind::kB2a:
      return "b2a";
    case BaselineKind::kB2b:
      return "b2b";
    case BaselineKind::kB3:
      return "b3";
  }
  return "b0";
}

std::string_view BaselineLabel(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kB0:
      return "Baseline-0";
    case BaselineKind::kB1a:
      return "Baseline-1a";
    case BaselineKind::kB1b:
      return "Baseline-1b";
    case BaselineKind::kB2a:
      return "Baseline-2a";
    case BaselineKind::kB2b:
      return "Baseline-2b";
    case BaselineKind::kB3:
      return "Baseline-3";
  }
  return "Baseline-0";
}

BaselineKind ParseBaseline(std::string_view name) {
  const std::string lower = ToLower(name);
  for (BaselineKind kind : kAllBaselines) {
    if (lower == BaselineName(kind)) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown baseline '" + std::string(name) +
                  "' (expected b0, b1a, b1b, b2a, b2b or b3)");
}

std::vector<EventTypeId> SimilarTypes(const Domain& domain,
                                      const Sentence& sentence,
                                      std::size_t threshold, double max_ratio,
                                      bool compound_tokens) {
  const std::vector<std::string> tokens =
      compound_tokens ? CompoundTokens(sentence.tokens) : sentence.tokens;
  std::vector<EventTypeId> out;
  for (EventTypeId type = 0; type < domain.events().size(); ++type) {
    if (MinEditDistance(domain.schema(type).name, tokens, max_ratio) <=
        threshold) {
      out.push_back(type);
    }
  }
  return out;
}

std::vector<EventTypeId> SameArityTypes(const Domain& domain,
                                        const Sentence& sentence) {
  std::vector<EventTypeId> out;
  for (EventTypeId type = 0; type < domain.events().size(); ++type) {
    if (domain.schema(type).arity() == sentence.mentions.size()) {
      out.push_back(type);
    }
  }
  return out;
}

GroundEvent GroundPadded(const Domain& domain, EventTypeId type,
                         std::span<const ConstantId> mentions,
                         std::optional<ConstantId> previous) {
  if (auto e = GroundFirst(domain, type, mentions, previous)) return *e;
  const EventSchema& schema = domain.schema(type);
  const std::vector<ConstantId> pool =
      ExtractArguments(mentions, previous, schema.arity());
  std::vector<ConstantId> args;
  for (const Parameter& param : schema.params) {
    const auto& roster = domain.ConstantsOfType(param.type);
    std::optional<ConstantId> pick;
    for (const std::vector<ConstantId>* source : {&pool, &roster}) {
      for (ConstantId c : *source) {
        if (domain.constants()[c].type == param.type &&
            std::find(args.begin(), args.end(), c) == args.end()) {
          pick = c;
          break;
        }
      }
      if (pick) break;
    }
    if (!pick) return GroundEvent{domain.nothing(), {}};
    args.push_back(*pick);
  }
  return GroundEvent{type, std::move(args)};
}

std::vector<GroundEvent> Baseline(BaselineKind kind, const Narrative& narrative,
                                  const Domain& domain, Rng& rng,
                                  const BaselineOptions& options) {
  const auto carried = CarriedArguments(narrative);
  const std::size_t n_types = domain.events().size();
  std::vector<EventTypeId> all(n_types);
  for (EventTypeId i = 0; i < n_types; ++i) all[i] = i;

  auto allowed = [&](const Sentence& s) {
    std::vector<EventTypeId> similar =
        SimilarTypes(domain, s, options.edit_distance_threshold,
                     options.max_edit_ratio, options.compound_tokens);
    std::vector<EventTypeId> arity = SameArityTypes(domain, s);
    std::vector<EventTypeId> out;
    switch (kind) {
      case BaselineKind::kB0:
        return all;
      case BaselineKind::kB1a:
      case BaselineKind::kB2a:
        out = std::move(similar);
        break;
      case BaselineKind::kB1b:
      case BaselineKind::kB2b:
        out = std::move(arity);
        break;
      case BaselineKind::kB3:
        if (options.b3_union) {
          std::set_union(similar.begin(), similar.end(), arity.begin(),
                         arity.end(), std::back_inserter(out));
        } else {
          std::set_intersection(similar.begin(), similar.end(), arity.begin(),
                                arity.end(), std::back_inserter(out));
        }
        break;
    }
    return out.empty() ? all : out;
  };

  std::vector<GroundEvent> out;
  if (kind == BaselineKind::kB0 || kind == BaselineKind::kB1a ||
      kind == BaselineKind::kB1b) {
    for (std::size_t t = 0; t < narrative.size(); ++t) {
      const Sentence& s = narrative.sentences[t];
      const std::vector<EventTypeId> types = allowed(s);
      const EventTypeId type = types[rng.UniformIndex(types.size())];
      out.push_back(GroundPadded(domain, type, s.mentions, carried[t]));
    }
    return out;
  }

  if (narrative.size() == 0) return out;
  CandidateSets sets;
  for (std::size_t t = 0; t < narrative.size(); ++t) {
    const Sentence& s = narrative.sentences[t];
    const std::vector<EventTypeId> types = allowed(s);
    std::vector<GroundEvent> all_candidates =
        CandidateEvents(domain, s.mentions, carried[t]);
    std::vector<GroundEvent> kept;
    for (const GroundEvent& e : all_candidates) {
      if (std::binary_search(types.begin(), types.end(), e.type)) {
        kept.push_back(e);
      }
    }
    if (kept.empty()) kept = std::move(all_candidates);
    // A seeded shuffle turns the decoder's first-wins tie rule into a
    // uniform random choice among equally scored sequences.
    for (std::size_t i = kept.size(); i > 1; --i) {
      std::swap(kept[i - 1], kept[rng.UniformIndex(i)]);
    }
    sets.push_back(std::move(kept));
  }
  return Viterbi(domain, narrative, sets, UniformScorer(), options.penalty)
      .events;
}

void WriteDecode(std::ostream& out, const Domain& domain,
                 const Narrative& narrative, const DecodeResult& result,
                 std::optional<double> oracle_utility) {
  for (std::size_t t = 0; t < result.events.size(); ++t) {
    const GroundEvent& e = result.events[t];
    ordered_json rec;
    rec["game"] = narrative.id;
    rec["idx"] = narrative.sentences[t].index;
    rec["event"] = domain.schema(e.type).name;
    ordered_json args = ordered_json::array();
    for (ConstantId c : e.args) args.push_back(domain.constants()[c].name);
    rec["args"] = std::move(args);
    rec["norm_score"] = result.norm_scores[t];
    rec["penalized"] = static_cast<bool>(result.penalized[t]);
    rec["state_size"] = result.states[t].size();
    out << rec.dump() << '\n';
  }
  ordered_json footer;
  footer["game"] = narrative.id;
  footer["footer"] = true;
  footer["n_sentences"] = result.events.size();
  footer["total_utility"] = result.utility;
  if (oracle_utility) footer["oracle_utility"] = *oracle_utility;
  out << footer.dump() << '\n';
}

}  // namespace item
