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

#ifndef ITEM_SRC_CONFIG_JSON_HPP_
#define ITEM_SRC_CONFIG_JSON_HPP_

#include <string>

#include "item/decode.hpp"
#include "item/learn.hpp"
#include "item/simulator.hpp"
#include "json.hpp"

namespace item::internal {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json ToJson(const TrainConfig& config);
ordered_json ToJson(const PenaltyConfig& config);
ordered_json ToJson(const SimulatorConfig& config);

// Overlay the keys present in `j` onto `config`. Unknown keys and wrongly
// typed values throw Error(kInvalidConfig) naming `where`.
void Apply(const json& j, TrainConfig* config, const std::string& where);
void Apply(const json& j, PenaltyConfig* config, const std::string& where);
void Apply(const json& j, SimulatorConfig* config, const std::string& where);

}  // namespace item::internal

#endif  // ITEM_SRC_CONFIG_JSON_HPP_
