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

#ifndef ITEM_CORPUS_HPP_
#define ITEM_CORPUS_HPP_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "item/logic.hpp"

namespace item {

// Multi-word player aliases ("pink goalie" -> Pink1).
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::map<std::string, std::string>& aliases);

  // Reads {"aliases": {"pink goalie": "Pink1", ...}}.
  static AliasTable Load(const std::string& path);
  static AliasTable Parse(std::string_view text, std::string_view source);

  bool empty() const { return entries_.empty(); }

  struct Entry {
    std::vector<std::string> tokens;  // lowercase alias tokens
    std::string constant;             // lowercase constant name
  };
  // Longest aliases first.
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Lowercase alphanumeric tokens; every other character separates tokens.
// Alias phrases (optionally preceded by "the") collapse to the lowercase
// constant name.
std::vector<std::string> Tokenize(std::string_view text,
                                  const AliasTable* aliases = nullptr);

struct Sentence {
  std::size_t index = 0;
  std::string text;
  std::vector<std::string> tokens;
  // Player constants mentioned, in textual order, first mention only.
  std::vector<ConstantId> mentions;
  std::optional<GroundEvent> gold;
};

struct Narrative {
  std::string id;
  std::vector<Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
};

// Player-type constants appearing among the tokens.
std::vector<ConstantId> FindMentions(const Domain& domain,
                                     std::span<const std::string> tokens);

Sentence MakeSentence(const Domain& domain, std::size_t index, std::string text,
                      const AliasTable* aliases = nullptr,
                      std::optional<GroundEvent> gold = std::nullopt);

// JSON-lines corpus, one sentence per line:
//   {"game": str, "idx": int, "text": str,
//    "gold": {"event": str, "args": [str]} | null}
// Narratives appear in order of first occurrence; idx must cover 0..n-1.
std::vector<Narrative> ParseCorpus(std::istream& in, const Domain& domain,
                                   const AliasTable* aliases = nullptr,
                                   std::string_view source = "corpus");
std::vector<Narrative> LoadCorpus(const std::string& path, const Domain& domain,
                                  const AliasTable* aliases = nullptr);
void WriteCorpus(std::ostream& out, std::span<const Narrative> narratives,
                 const Domain& domain);

// Parses "pass(purple10,purple11)" against the domain (case-insensitive).
GroundEvent ParseMeaning(const Domain& domain, std::string_view text);

// Converts "text<TAB>meaning" lines (meaning may be empty) into a narrative.
Narrative ConvertTsv(std::istream& in, std::string game, const Domain& domain,
                     const AliasTable* aliases = nullptr);

// Per sentence, the argument it inherits: the last mention of the closest
// earlier sentence that mentions anyone.
std::vector<std::optional<ConstantId>> CarriedArguments(
    const Narrative& narrative);

// Argument candidates for sentence `index`: its mentions in textual order,
// with the previous sentence's last argument prepended when there are fewer
// mentions than `required_arity`. Over-supply is returned unreduced.
std::vector<ConstantId> ExtractArguments(const Narrative& narrative,
                                         std::size_t index,
                                         std::size_t required_arity);
std::vector<ConstantId> ExtractArguments(
    std::span<const ConstantId> mentions,
    std::optional<ConstantId> previous_last, std::size_t required_arity);

// Ordered tuples of `arity` distinct positions of `args` holding distinct
// constants, lexicographic in positions. Empty when args.size() < arity; a
// single empty tuple for arity 0.
std::vector<std::vector<ConstantId>> ArgumentTuples(
    std::span<const ConstantId> args, std::size_t arity);

}  // namespace item

#endif  // ITEM_CORPUS_HPP_
