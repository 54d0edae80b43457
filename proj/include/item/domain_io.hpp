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

#ifndef ITEM_DOMAIN_IO_HPP_
#define ITEM_DOMAIN_IO_HPP_

#include <string>
#include <string_view>

#include "item/logic.hpp"

namespace item {

// Parses a domain definition document:
//
//   {"constants":  ["Pink1", {"name": "Pink", "type": "team"}, ...],
//    "predicates": [{"name": "holding", "arity": 1, "exclusive": true}, ...],
//    "events":     [{"name": "pass", "params": ["player1", "player2"],
//                    "preconditions": [{"predicate": "holding",
//                                       "args": ["player1"],
//                                       "negated": false}],
//                    "effects": [...]}, ...]}
//
// Literal args that name a param are variables; anything else must be a
// constant. Errors carry the 1-based line of the offending element.
Domain ParseDomain(std::string_view text, std::string_view source = "domain");
Domain LoadDomain(const std::string& path);

// The bundled RoboCup soccer domain (16 event types including Nothing).
const std::string& DefaultDomainText();
Domain DefaultDomain();

}  // namespace item

#endif  // ITEM_DOMAIN_IO_HPP_
