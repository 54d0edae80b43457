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

#include "item/simulator.hpp"

#include <algorithm>
#include <cctype>

#include "item/error.hpp"
#include "item/random.hpp"

namespace item {
namespace {

void Groundings(const Domain& domain, const EventSchema& schema,
                std::vector<ConstantId>& current,
                std::vector<std::vector<ConstantId>>& out) {
  if (current.size() == schema.arity()) {
    out.push_back(current);
    return;
  }
  for (ConstantId c :
       domain.ConstantsOfType(schema.params[current.size()].type)) {
    if (std::find(current.begin(), current.end(), c) != current.end()) {
      continue;
    }
    current.push_back(c);
    Groundings(domain, schema, current, out);
    current.pop_back();
  }
}

bool UsesPronoun(const std::string& tmpl) {
  return tmpl.find("{he}") != std::string::npos;
}

std::string Render(const std::string& tmpl, const Domain& domain,
                   const GroundEvent& event, Rng& rng) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    const auto close = tmpl.find('}', i);
    const std::string slot = tmpl.substr(i + 1, close - i - 1);
    i = close + 1;
    if (slot == "he") {
      out += out.empty() ? "He" : "he";
    } else if (slot.size() > 1 && slot[0] == 'a' &&
               std::all_of(slot.begin() + 1, slot.end(), [](char c) {
                 return std::isdigit(static_cast<unsigned char>(c));
               })) {
      const std::size_t k = std::stoul(slot.substr(1));
      out += domain.constants()[event.args.at(k)].name;
    } else {
      std::vector<std::string> options;
      std::size_t start = 0;
      while (true) {
        const auto bar = slot.find('|', start);
        options.push_back(slot.substr(start, bar - start));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      out += options[rng.UniformIndex(options.size())];
    }
  }
  return out;
}

void ValidateTemplate(const std::string& tmpl, std::size_t arity,
                      const std::string& type) {
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{') continue;
    const auto close = tmpl.find('}', i);
    if (close == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "template for '" + type + "' has an unclosed '{': " + tmpl);
    }
    const std::string slot = tmpl.substr(i + 1, close - i - 1);
    const bool is_arg = slot.size() > 1 && slot[0] == 'a' &&
                        std::all_of(slot.begin() + 1, slot.end(), [](char c) {
                          return std::isdigit(static_cast<unsigned char>(c));
                        });
    if (is_arg && std::stoul(slot.substr(1)) >= arity) {
      throw Error(ErrorCode::kInvalidConfig,
                  "template for '" + type + "' references {" + slot +
                      "} beyond arity " + std::to_string(arity));
    }
    if (slot == "he" && arity == 0) {
      throw Error(ErrorCode::kInvalidConfig,
                  "template for zero-arity '" + type + "' uses {he}");
    }
    i = close;
  }
}

}  // namespace

void SimulatorConfig::Validate(const Domain& domain) const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string(name) + " must be in [0, 1]");
    }
  };
  prob(p_nothing, "p_nothing");
  prob(p_miss, "p_miss");
  if (p_miss >= 1.0 && p_nothing <= 0.0) {
    throw Error(ErrorCode::kInvalidConfig,
                "p_miss = 1 with p_nothing = 0 never emits a sentence");
  }
  for (const auto& schema : domain.events()) {
    auto it = templates.find(schema.name);
    if (it == templates.end() || it->second.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "no template for event type '" + schema.name + "'");
    }
    bool has_plain = false;
    for (const auto& t : it->second) {
      ValidateTemplate(t, schema.arity(), schema.name);
      has_plain = has_plain || !UsesPronoun(t);
    }
    if (!has_plain) {
      throw Error(ErrorCode::kInvalidConfig,
                  "event type '" + schema.name +
                      "' needs at least one template without {he}");
    }
  }
  for (const auto& [name, w] : templates) {
    if (!domain.FindEvent(name)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "template for unknown event type '" + name + "'");
    }
  }
  for (const auto& [name, w] : type_weights) {
    if (!domain.FindEvent(name)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "weight for unknown event type '" + name + "'");
    }
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "weight for '" + name + "' must be non-negative");
    }
  }
}

SimulatorConfig DefaultSimulatorConfig() {
  SimulatorConfig c;
  c.templates = {
      {"pass",
       {"{a0} passes to {a1}.", "{a0} passes the ball to {a1}.",
        "{a0} {makes|plays} a {quick|short|nice} pass to {a1}.",
        "{a0} kicks to {a1}.", "{a0} finds {a1} on the {left|right} side.",
        "{he} {sends|slides} it over to {a1}."}},
      {"badPass",
       {"{a0} made a bad pass that was intercepted by {a1}.",
        "{a0} tries to pass but it is picked off by {a1}.",
        "{a0} sends a sloppy ball straight to {a1}.",
        "{he} {misplaces|overhits} the ball and {a1} collects."}},
      {"turnover",
       {"Turnover by {a0} to {a1}.", "{a0} loses the ball to {a1}.",
        "{a0} {coughs up|gives away} possession to {a1}.",
        "{a0} tries to dribble but {a1} comes away with it."}},
      {"kick",
       {"{a0} kicks the ball {upfield|away|forward}.", "{a0} kicks it long.",
        "{a0} shoots!", "{a0} takes a {long|hard} shot.",
        "{he} {fires|blasts} it toward the goal."}},
      {"steal",
       {"{a0} steals the ball.", "{a0} steals it {away|back}.",
        "{a0} {wins|takes} the ball back.",
        "{a0} {snatches|grabs} possession."}},
      {"block",
       {"{a0} blocks the shot.", "{a0} blocks it.",
        "{a0} makes a {great|fine|diving} save.",
        "{a0} {stops|denies} the attempt."}},
      {"defense",
       {"{a0} defends {tightly|well}.", "Good defense by {a0}.",
        "{a0} {closes down|pressures} the attacker."}},
      {"corner",
       {"{Pink|Purple} {gets|wins} a corner kick.", "Corner kick.",
        "The ball goes out for a corner."}},
      {"offside",
       {"Offside has been called on the {Pink|Purple} team.",
        "The flag is up for offside.", "{Pink|Purple} is caught offside."}},
      {"penalty",
       {"Penalty to the {Pink|Purple} team!", "The referee points to the spot.",
        "A penalty has been awarded."}},
      {"freekick",
       {"Free kick for {Pink|Purple}.", "Freekick for {Pink|Purple}.",
        "The referee awards a free kick."}},
      {"goalkick",
       {"Goal kick for {Pink|Purple}.", "Goalkick for {Pink|Purple}.",
        "The ball rolls out for a goal kick."}},
      {"kickoff",
       {"{Pink|Purple} kicks off.", "Kickoff by {Pink|Purple}.",
        "The match restarts and {Pink|Purple} gets us underway."}},
      {"goal",
       {"Goal!", "{Pink|Purple} scores a goal!",
        "It is in the back of the net!"}},
      {"ballstopped",
       {"The ball has stopped.", "Play comes to a halt.",
        "The ball sits still in midfield."}},
      {"Nothing",
       {"Today we have a nice match between the pink and the purple team.",
        "What a beautiful day for soccer.", "The crowd is getting loud.",
        "Both teams look sharp today.",
        "We are approaching the end of the half.",
        "Let us see what happens next."}},
  };
  c.type_weights = {
      {"pass", 0.30},    {"badPass", 0.08},  {"turnover", 0.06},
      {"kick", 0.12},    {"steal", 0.08},    {"block", 0.05},
      {"defense", 0.06}, {"corner", 0.03},   {"offside", 0.03},
      {"penalty", 0.02}, {"freekick", 0.03}, {"goalkick", 0.03},
      {"kickoff", 0.03}, {"goal", 0.03},     {"ballstopped", 0.05},
  };
  return c;
}

SyntheticGame GenerateSynthetic(const Domain& domain,
                                const SimulatorConfig& config,
                                std::string game_id) {
  config.Validate(domain);
  Rng rng(config.seed);

  struct TypeTable {
    EventTypeId type;
    double weight;
    std::vector<GroundedEvent> groundings;
  };
  std::vector<TypeTable> tables;
  for (EventTypeId t = 0; t < domain.events().size(); ++t) {
    if (t == domain.nothing()) continue;
    const auto& schema = domain.schema(t);
    auto wit = config.type_weights.find(schema.name);
    const double w = wit == config.type_weights.end() ? 1.0 : wit->second;
    if (w <= 0.0) continue;
    std::vector<std::vector<ConstantId>> rows;
    std::vector<ConstantId> current;
    Groundings(domain, schema, current, rows);
    TypeTable table{t, w, {}};
    for (auto& row : rows) {
      table.groundings.push_back(domain.Ground(GroundEvent{t, row}));
    }
    if (!table.groundings.empty()) tables.push_back(std::move(table));
  }

  SyntheticGame game;
  game.narrative.id = std::move(game_id);
  BeliefState state = BeliefState::Top();
  std::optional<ConstantId> carry;

  auto emit = [&](const GroundEvent& event) {
    const auto& options = config.templates.at(domain.schema(event.type).name);
    std::vector<const std::string*> eligible;
    for (const auto& t : options) {
      if (UsesPronoun(t) &&
          !(carry && !event.args.empty() && event.args[0] == *carry)) {
        continue;
      }
      eligible.push_back(&t);
    }
    const std::string& tmpl = *eligible[rng.UniformIndex(eligible.size())];
    std::string text = Render(tmpl, domain, event, rng);
    Sentence s = MakeSentence(domain, game.narrative.sentences.size(),
                              std::move(text), nullptr, event);
    if (!s.mentions.empty()) carry = s.mentions.back();
    game.narrative.sentences.push_back(std::move(s));
    return game.narrative.sentences.size() - 1;
  };

  const GroundEvent nothing{domain.nothing(), {}};
  while (game.narrative.sentences.size() < config.n_sentences) {
    if (rng.Bernoulli(config.p_nothing)) {
      const std::size_t idx = emit(nothing);
      game.trace.push_back(TraceStep{nothing, idx, state, state});
      continue;
    }
    std::vector<std::vector<const GroundedEvent*>> feasible(tables.size());
    double total = 0.0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      for (const auto& g : tables[i].groundings) {
        if (Consistent(domain, state, g.preconditions)) {
          feasible[i].push_back(&g);
        }
      }
      if (!feasible[i].empty()) total += tables[i].weight;
    }
    if (total <= 0.0) {
      // Dead end: restart from the fully unknown state.
      state = BeliefState::Top();
      if (tables.empty()) {
        const std::size_t idx = emit(nothing);
        game.trace.push_back(TraceStep{nothing, idx, state, state});
      }
      continue;
    }
    double pick = rng.Uniform01() * total;
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (feasible[i].empty()) continue;
      chosen = i;
      if (pick < tables[i].weight) break;
      pick -= tables[i].weight;
    }
    const GroundedEvent& g =
        *feasible[chosen][rng.UniformIndex(feasible[chosen].size())];
    BeliefState next = Progress(domain, state, g);
    TraceStep step{g.event, std::nullopt, state, next};
    state = std::move(next);
    if (!rng.Bernoulli(config.p_miss)) step.sentence = emit(g.event);
    game.trace.push_back(std::move(step));
  }
  return game;
}

std::vector<SyntheticGame> GenerateGames(const Domain& domain,
                                         const SimulatorConfig& config,
                                         std::size_t n_games,
                                         const std::string& prefix) {
  std::vector<SyntheticGame> out;
  for (std::size_t g = 0; g < n_games; ++g) {
    SimulatorConfig per_game = config;
    const std::string id = prefix + std::to_string(g + 1);
    per_game.seed = DeriveSeed(config.seed, "game/" + id);
    out.push_back(GenerateSynthetic(domain, per_game, id));
  }
  return out;
}

}  // namespace item
