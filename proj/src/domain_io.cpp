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

#include "item/domain_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "item/error.hpp"
#include "json.hpp"
#include "json_locator.hpp"

namespace item {
namespace {

using nlohmann::json;

class DomainReader {
 public:
  DomainReader(std::string_view text, std::string_view source)
      : source_(source), locator_(text, source) {
    doc_ = json::parse(text);
  }

  Domain Read() {
    if (!doc_.is_object()) Fail("", "top level must be an object");
    for (const auto& [key, _] : doc_.items()) {
      if (key != "constants" && key != "predicates" && key != "events") {
        Fail("/" + key, "unknown top-level key '" + key + "'");
      }
    }
    auto constants = ReadConstants();
    auto predicates = ReadPredicates();
    auto events = ReadEvents(constants, predicates);
    try {
      return Domain(std::move(constants), std::move(predicates),
                    std::move(events));
    } catch (const Error& e) {
      throw Error(e.code(), 1, source_ + ": " + e.what());
    }
  }

 private:
  [[noreturn]] void Fail(const std::string& pointer, const std::string& msg,
                         ErrorCode code = ErrorCode::kInvalidDomain) const {
    throw Error(code, locator_.LineOf(pointer), source_ + ": " + msg);
  }

  const json& Array(const json& parent, const std::string& key,
                    const std::string& pointer, bool required = true) const {
    static const json kEmpty = json::array();
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) Fail(pointer, "missing '" + key + "'");
      return kEmpty;
    }
    if (!it->is_array())
      Fail(pointer + "/" + key, "'" + key + "' must be an array");
    return *it;
  }

  std::string String(const json& value, const std::string& pointer,
                     const std::string& what) const {
    if (!value.is_string()) Fail(pointer, what + " must be a string");
    return value.get<std::string>();
  }

  std::vector<Constant> ReadConstants() {
    std::vector<Constant> out;
    std::set<std::string> seen;
    const auto& arr = Array(doc_, "constants", "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/constants/" + std::to_string(i);
      Constant c;
      if (arr[i].is_string()) {
        c.name = arr[i].get<std::string>();
      } else if (arr[i].is_object()) {
        c.name = String(arr[i].value("name", json()), ptr, "constant name");
        if (arr[i].contains("type")) {
          c.type = String(arr[i]["type"], ptr + "/type", "constant type");
        }
      } else {
        Fail(ptr, "constant must be a string or {name, type}");
      }
      if (c.name.empty()) Fail(ptr, "empty constant name");
      if (!seen.insert(c.name).second) {
        Fail(ptr, "duplicate constant '" + c.name + "'");
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<PredicateSchema> ReadPredicates() {
    std::vector<PredicateSchema> out;
    std::set<std::string> seen;
    const auto& arr = Array(doc_, "predicates", "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/predicates/" + std::to_string(i);
      const auto& p = arr[i];
      if (!p.is_object()) Fail(ptr, "predicate must be an object");
      PredicateSchema schema;
      schema.name = String(p.value("name", json()), ptr, "predicate name");
      if (!p.contains("arity") || !p["arity"].is_number_integer() ||
          p["arity"].get<long long>() < 0) {
        Fail(ptr + "/arity", "predicate '" + schema.name +
                                 "': arity must be a non-negative integer");
      }
      schema.arity = p["arity"].get<std::size_t>();
      if (p.contains("arg_types")) {
        const auto& types = Array(p, "arg_types", ptr);
        for (std::size_t k = 0; k < types.size(); ++k) {
          schema.arg_types.push_back(String(
              types[k], ptr + "/arg_types/" + std::to_string(k), "arg type"));
        }
        if (schema.arg_types.size() != schema.arity) {
          Fail(ptr + "/arg_types", "predicate '" + schema.name +
                                       "': arg_types length must equal arity");
        }
      }
      schema.exclusive = p.value("exclusive", false);
      schema.tracked = p.value("tracked", true);
      if (!seen.insert(schema.name).second) {
        Fail(ptr, "duplicate predicate '" + schema.name + "'");
      }
      out.push_back(std::move(schema));
    }
    return out;
  }

  LiteralTemplate ReadLiteral(const json& lit, const std::string& ptr,
                              const std::set<std::string>& params) const {
    if (!lit.is_object()) Fail(ptr, "literal must be an object");
    LiteralTemplate out;
    out.predicate = String(lit.value("predicate", json()), ptr, "predicate");
    const auto& args = Array(lit, "args", ptr, /*required=*/false);
    for (std::size_t k = 0; k < args.size(); ++k) {
      Term t;
      t.name = String(args[k], ptr + "/args/" + std::to_string(k), "arg");
      t.is_variable = params.count(t.name) != 0;
      out.args.push_back(std::move(t));
    }
    if (lit.contains("negated")) {
      if (!lit["negated"].is_boolean()) {
        Fail(ptr + "/negated", "'negated' must be a boolean");
      }
      out.negated = lit["negated"].get<bool>();
    }
    return out;
  }

  std::vector<EventSchema> ReadEvents(
      const std::vector<Constant>& constants,
      const std::vector<PredicateSchema>& predicates) {
    std::vector<EventSchema> out;
    std::set<std::string> seen;
    const auto& arr = Array(doc_, "events", "");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ptr = "/events/" + std::to_string(i);
      const auto& e = arr[i];
      if (!e.is_object()) Fail(ptr, "event must be an object");
      EventSchema schema;
      schema.name = String(e.value("name", json()), ptr, "event name");
      std::set<std::string> names;
      const auto& params = Array(e, "params", ptr, /*required=*/false);
      for (std::size_t k = 0; k < params.size(); ++k) {
        const std::string pptr = ptr + "/params/" + std::to_string(k);
        Parameter param;
        if (params[k].is_string()) {
          param.name = params[k].get<std::string>();
        } else if (params[k].is_object()) {
          param.name = String(params[k].value("name", json()), pptr, "param");
          if (params[k].contains("type")) {
            param.type = String(params[k]["type"], pptr, "param type");
          }
        } else {
          Fail(pptr, "param must be a string or {name, type}");
        }
        names.insert(param.name);
        schema.params.push_back(std::move(param));
      }
      const auto& pre = Array(e, "preconditions", ptr, /*required=*/false);
      for (std::size_t k = 0; k < pre.size(); ++k) {
        schema.preconditions.push_back(ReadLiteral(
            pre[k], ptr + "/preconditions/" + std::to_string(k), names));
      }
      const auto& eff = Array(e, "effects", ptr, /*required=*/false);
      for (std::size_t k = 0; k < eff.size(); ++k) {
        schema.effects.push_back(
            ReadLiteral(eff[k], ptr + "/effects/" + std::to_string(k), names));
      }
      if (!seen.insert(schema.name).second) {
        Fail(ptr, "duplicate event '" + schema.name + "'");
      }
      try {
        ValidateEventSchema(schema, constants, predicates);
      } catch (const Error& err) {
        Fail(ptr, err.what());
      }
      out.push_back(std::move(schema));
    }
    return out;
  }

  std::string source_;
  internal::JsonLocator locator_;
  json doc_;
};

}  // namespace

Domain ParseDomain(std::string_view text, std::string_view source) {
  return DomainReader(text, source).Read();
}

Domain LoadDomain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open domain file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseDomain(buf.str(), path);
}

const std::string& DefaultDomainText() {
  static const std::string kText =
#include "default_domain.inc"
      ;
  return kText;
}

Domain DefaultDomain() { return ParseDomain(DefaultDomainText(), "default"); }

}  // namespace item
