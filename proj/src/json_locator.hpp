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

#ifndef ITEM_SRC_JSON_LOCATOR_HPP_
#define ITEM_SRC_JSON_LOCATOR_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace item::internal {

// Maps JSON pointers ("/events/3/params") to the 1-based line where the
// element (or its member key) starts. Construction validates the syntax and
// throws Error(kParseError) with the failing line.
class JsonLocator {
 public:
  JsonLocator(std::string_view text, std::string_view source);

  // Line of `pointer`, or of its nearest recorded ancestor.
  std::size_t LineOf(std::string pointer) const;

 private:
  std::map<std::string, std::size_t> lines_;
};

}  // namespace item::internal

#endif  // ITEM_SRC_JSON_LOCATOR_HPP_
