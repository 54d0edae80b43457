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

#include "item/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "item/error.hpp"
#include "json.hpp"

namespace item {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

bool MatchesAt(const std::vector<std::string>& words, std::size_t pos,
               const std::vector<std::string>& phrase) {
  if (phrase.empty() || pos + phrase.size() > words.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), words.begin() + pos);
}

void Permute(std::span<const ConstantId> args, std::size_t arity,
             std::vector<bool>& used, std::vector<ConstantId>& current,
             std::vector<std::vector<ConstantId>>& out) {
  if (current.size() == arity) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (used[i]) continue;
    if (std::find(current.begin(), current.end(), args[i]) != current.end()) {
      continue;
    }
    used[i] = true;
    current.push_back(args[i]);
    Permute(args, arity, used, current, out);
    current.pop_back();
    used[i] = false;
  }
}

}  // namespace

AliasTable::AliasTable(const std::map<std::string, std::string>& aliases) {
  for (const auto& [phrase, constant] : aliases) {
    Entry e{SplitWords(phrase), ToLower(constant)};
    if (e.tokens.empty()) continue;
    entries_.push_back(std::move(e));
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.tokens.size() > b.tokens.size();
                   });
}

AliasTable AliasTable::Parse(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string(source) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("aliases") ||
      !doc["aliases"].is_object()) {
    throw Error(ErrorCode::kParseError,
                std::string(source) + ": expected {\"aliases\": {...}}");
  }
  std::map<std::string, std::string> aliases;
  for (const auto& [k, v] : doc["aliases"].items()) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kParseError, std::string(source) + ": alias '" +
                                              k + "' must map to a string");
    }
    aliases[k] = v.get<std::string>();
  }
  return AliasTable(aliases);
}

AliasTable AliasTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open alias file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str(), path);
}

std::vector<std::string> Tokenize(std::string_view text,
                                  const AliasTable* aliases) {
  std::vector<std::string> words = SplitWords(text);
  if (aliases == nullptr || aliases->empty()) return words;
  std::vector<std::string> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size();) {
    bool matched = false;
    for (const auto& entry : aliases->entries()) {
      // A determiner in front of the alias belongs to the noun phrase.
      if (words[i] == "the" && MatchesAt(words, i + 1, entry.tokens)) {
        out.push_back(entry.constant);
        i += 1 + entry.tokens.size();
        matched = true;
        break;
      }
      if (MatchesAt(words, i, entry.tokens)) {
        out.push_back(entry.constant);
        i += entry.tokens.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(words[i++]);
  }
  return out;
}

std::vector<ConstantId> FindMentions(const Domain& domain,
                                     std::span<const std::string> tokens) {
  std::vector<ConstantId> out;
  const auto& players = domain.ConstantsOfType(kDefaultType);
  for (const auto& tok : tokens) {
    for (ConstantId c : players) {
      if (ToLower(domain.constants()[c].name) == tok) {
        if (std::find(out.begin(), out.end(), c) == out.end()) {
          out.push_back(c);
        }
        break;
      }
    }
  }
  return out;
}

Sentence MakeSentence(const Domain& domain, std::size_t index, std::string text,
                      const AliasTable* aliases,
                      std::optional<GroundEvent> gold) {
  Sentence s;
  s.index = index;
  s.tokens = Tokenize(text, aliases);
  s.mentions = FindMentions(domain, s.tokens);
  s.text = std::move(text);
  s.gold = std::move(gold);
  return s;
}

std::vector<Narrative> ParseCorpus(std::istream& in, const Domain& domain,
                                   const AliasTable* aliases,
                                   std::string_view source) {
  struct Pending {
    std::size_t idx;
    std::size_t line;
    Sentence sentence;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Pending>> games;
  std::string raw;
  std::size_t line_no = 0;
  const std::string src(source);
  while (std::getline(in, raw)) {
    ++line_no;
    if (std::all_of(raw.begin(), raw.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json rec;
    try {
      rec = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParseError, line_no, src + ": " + e.what());
    }
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::kParseError, line_no, src + ": " + msg);
    };
    if (!rec.is_object()) fail("record must be an object");
    if (!rec.contains("game") || !rec["game"].is_string()) {
      fail("'game' must be a string");
    }
    if (!rec.contains("idx") || !rec["idx"].is_number_unsigned()) {
      fail("'idx' must be a non-negative integer");
    }
    if (!rec.contains("text") || !rec["text"].is_string()) {
      fail("'text' must be a string");
    }
    std::optional<GroundEvent> gold;
    if (rec.contains("gold") && !rec["gold"].is_null()) {
      const auto& g = rec["gold"];
      if (!g.is_object() || !g.contains("event") || !g["event"].is_string()) {
        fail("'gold' must be null or {\"event\": str, \"args\": [str]}");
      }
      std::vector<std::string> args;
      if (g.contains("args")) {
        if (!g["args"].is_array()) fail("'gold.args' must be an array");
        for (const auto& a : g["args"]) {
          if (!a.is_string()) fail("'gold.args' entries must be strings");
          args.push_back(a.get<std::string>());
        }
      }
      try {
        gold = domain.MakeEvent(g["event"].get<std::string>(), args);
      } catch (const Error& e) {
        throw Error(e.code(), line_no, src + ": " + e.what());
      }
    }
    const std::string game = rec["game"].get<std::string>();
    if (!games.count(game)) order.push_back(game);
    games[game].push_back(
        Pending{rec["idx"].get<std::size_t>(), line_no,
                MakeSentence(domain, rec["idx"].get<std::size_t>(),
                             rec["text"].get<std::string>(), aliases,
                             std::move(gold))});
  }

  std::vector<Narrative> out;
  for (const auto& game : order) {
    auto& pending = games[game];
    std::stable_sort(
        pending.begin(), pending.end(),
        [](const Pending& a, const Pending& b) { return a.idx < b.idx; });
    Narrative n;
    n.id = game;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].idx != i) {
        throw Error(
            ErrorCode::kParseError, pending[i].line,
            src + ": game '" + game + "' idx " +
                std::to_string(pending[i].idx) +
                (pending[i].idx < i ? " is duplicated"
                                    : " leaves a gap at " + std::to_string(i)));
      }
      n.sentences.push_back(std::move(pending[i].sentence));
    }
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<Narrative> LoadCorpus(const std::string& path, const Domain& domain,
                                  const AliasTable* aliases) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open corpus file " + path);
  }
  return ParseCorpus(in, domain, aliases, path);
}

void WriteCorpus(std::ostream& out, std::span<const Narrative> narratives,
                 const Domain& domain) {
  for (const auto& n : narratives) {
    for (const auto& s : n.sentences) {
      ordered_json rec;
      rec["game"] = n.id;
      rec["idx"] = s.index;
      rec["text"] = s.text;
      if (s.gold) {
        ordered_json g;
        g["event"] = domain.schema(s.gold->type).name;
        g["args"] = ordered_json::array();
        for (ConstantId c : s.gold->args) {
          g["args"].push_back(domain.constants()[c].name);
        }
        rec["gold"] = std::move(g);
      } else {
        rec["gold"] = nullptr;
      }
      out << rec.dump() << '\n';
    }
  }
}

GroundEvent ParseMeaning(const Domain& domain, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  };
  text = trim(text);
  const auto open = text.find('(');
  std::string_view name = trim(text.substr(0, open));
  std::vector<std::string> args;
  if (open != std::string_view::npos) {
    const auto close = text.rfind(')');
    if (close == std::string_view::npos || close < open) {
      throw Error(ErrorCode::kParseError,
                  "malformed meaning '" + std::string(text) + "'");
    }
    std::string_view inner = text.substr(open + 1, close - open - 1);
    while (!trim(inner).empty()) {
      const auto comma = inner.find(',');
      args.emplace_back(trim(inner.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      inner.remove_prefix(comma + 1);
    }
  }
  return domain.MakeEvent(name, args);
}

Narrative ConvertTsv(std::istream& in, std::string game, const Domain& domain,
                     const AliasTable* aliases) {
  Narrative n;
  n.id = std::move(game);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const auto tab = raw.find('\t');
    std::string text = raw.substr(0, tab);
    std::optional<GroundEvent> gold;
    if (tab != std::string::npos) {
      const std::string meaning = raw.substr(tab + 1);
      if (meaning.find_first_not_of(" \t") != std::string::npos) {
        try {
          gold = ParseMeaning(domain, meaning);
        } catch (const Error& e) {
          throw Error(e.code(), line_no, e.what());
        }
      }
    }
    n.sentences.push_back(MakeSentence(
        domain, n.sentences.size(), std::move(text), aliases, std::move(gold)));
  }
  return n;
}

std::vector<std::optional<ConstantId>> CarriedArguments(
    const Narrative& narrative) {
  std::vector<std::optional<ConstantId>> incoming(narrative.size());
  std::optional<ConstantId> carry;
  for (std::size_t t = 0; t < narrative.size(); ++t) {
    incoming[t] = carry;
    const auto& mentions = narrative.sentences[t].mentions;
    if (!mentions.empty()) carry = mentions.back();
  }
  return incoming;
}

std::vector<ConstantId> ExtractArguments(
    std::span<const ConstantId> mentions,
    std::optional<ConstantId> previous_last, std::size_t required_arity) {
  std::vector<ConstantId> out(mentions.begin(), mentions.end());
  if (out.size() < required_arity && previous_last) {
    out.insert(out.begin(), *previous_last);
  }
  return out;
}

std::vector<ConstantId> ExtractArguments(const Narrative& narrative,
                                         std::size_t index,
                                         std::size_t required_arity) {
  std::optional<ConstantId> previous;
  for (std::size_t t = 0; t < index; ++t) {
    const auto& m = narrative.sentences[t].mentions;
    if (!m.empty()) previous = m.back();
  }
  return ExtractArguments(narrative.sentences.at(index).mentions, previous,
                          required_arity);
}

std::vector<std::vector<ConstantId>> ArgumentTuples(
    std::span<const ConstantId> args, std::size_t arity) {
  std::vector<std::vector<ConstantId>> out;
  if (args.size() < arity) return out;
  std::vector<bool> used(args.size(), false);
  std::vector<ConstantId> current;
  Permute(args, arity, used, current, out);
  return out;
}

}  // namespace item
