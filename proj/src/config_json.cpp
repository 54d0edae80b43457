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

#include "config_json.hpp"

#include <functional>
#include <map>
#include <type_traits>

#include "item/error.hpp"

namespace item::internal {
namespace {

using Setter = std::function<void(const json&)>;

void ApplyFields(const json& j, const std::map<std::string, Setter>& fields,
                 const std::string& where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, where + ": expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw Error(ErrorCode::kInvalidConfig,
                  where + ": unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  where + "." + key + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  where + "." + key + ": " + e.what());
    }
  }
}

template <typename T>
Setter Field(T* target) {
  return [target](const json& v) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) {
        throw Error(ErrorCode::kInvalidConfig, "expected a boolean");
      }
    } else if constexpr (std::is_integral_v<T>) {
      const bool ok = v.is_number_unsigned() ||
                      (v.is_number_integer() && v.get<long long>() >= 0);
      if (!ok) {
        throw Error(ErrorCode::kInvalidConfig,
                    "expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) {
        throw Error(ErrorCode::kInvalidConfig, "expected a number");
      }
    }
    *target = v.get<T>();
  };
}

}  // namespace

ordered_json ToJson(const TrainConfig& c) {
  ordered_json j;
  j["n_samples_per_sentence"] = c.n_samples_per_sentence;
  j["edit_distance_threshold"] = c.edit_distance_threshold;
  j["max_edit_ratio"] = c.max_edit_ratio;
  j["compound_tokens"] = c.compound_tokens;
  j["epsilon"] = c.epsilon;
  j["max_outer_iterations"] = c.max_outer_iterations;
  j["learning_rate"] = c.learning_rate;
  j["l2_lambda"] = c.l2_lambda;
  j["max_gd_epochs"] = c.max_gd_epochs;
  j["gd_tolerance"] = c.gd_tolerance;
  j["negative_positive_ratio"] = c.negative_positive_ratio;
  j["stratified_balance"] = c.stratified_balance;
  j["seed"] = c.seed;
  j["two_bit_state"] = c.features.two_bit_state;
  j["event_conjunctions"] = c.features.event_conjunctions;
  j["compete_all_types"] = c.compete_all_types;
  j["grounding_retries"] = c.grounding_retries;
  return j;
}

ordered_json ToJson(const PenaltyConfig& c) {
  ordered_json j;
  j["r_infeasible"] = c.r_infeasible;
  j["beam_width"] = c.beam_width;
  return j;
}

ordered_json ToJson(const SimulatorConfig& c) {
  ordered_json j;
  j["n_sentences"] = c.n_sentences;
  j["p_nothing"] = c.p_nothing;
  j["p_miss"] = c.p_miss;
  j["seed"] = c.seed;
  j["templates"] = c.templates;
  j["type_weights"] = c.type_weights;
  return j;
}

void Apply(const json& j, TrainConfig* c, const std::string& where) {
  ApplyFields(j,
              {{"n_samples_per_sentence", Field(&c->n_samples_per_sentence)},
               {"edit_distance_threshold", Field(&c->edit_distance_threshold)},
               {"max_edit_ratio", Field(&c->max_edit_ratio)},
               {"compound_tokens", Field(&c->compound_tokens)},
               {"epsilon", Field(&c->epsilon)},
               {"max_outer_iterations", Field(&c->max_outer_iterations)},
               {"learning_rate", Field(&c->learning_rate)},
               {"l2_lambda", Field(&c->l2_lambda)},
               {"max_gd_epochs", Field(&c->max_gd_epochs)},
               {"gd_tolerance", Field(&c->gd_tolerance)},
               {"negative_positive_ratio", Field(&c->negative_positive_ratio)},
               {"stratified_balance", Field(&c->stratified_balance)},
               {"seed", Field(&c->seed)},
               {"two_bit_state", Field(&c->features.two_bit_state)},
               {"event_conjunctions", Field(&c->features.event_conjunctions)},
               {"compete_all_types", Field(&c->compete_all_types)},
               {"grounding_retries", Field(&c->grounding_retries)}},
              where);
}

void Apply(const json& j, PenaltyConfig* c, const std::string& where) {
  ApplyFields(j,
              {{"r_infeasible", Field(&c->r_infeasible)},
               {"beam_width", Field(&c->beam_width)}},
              where);
}

void Apply(const json& j, SimulatorConfig* c, const std::string& where) {
  ApplyFields(j,
              {{"n_sentences", Field(&c->n_sentences)},
               {"p_nothing", Field(&c->p_nothing)},
               {"p_miss", Field(&c->p_miss)},
               {"seed", Field(&c->seed)},
               {"templates",
                [c](const json& v) {
                  c->templates =
                      v.get<std::map<std::string, std::vector<std::string>>>();
                }},
               {"type_weights",
                [c](const json& v) {
                  c->type_weights = v.get<std::map<std::string, double>>();
                }}},
              where);
}

}  // namespace item::internal
