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

#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "config_json.hpp"
#include "item/error.hpp"
#include "item/eval.hpp"
#include "item/learn.hpp"

namespace item {

using internal::json;
using internal::ordered_json;

namespace {
constexpr const char* kModelFormat = "item-model/1";
}  // namespace

void WriteModel(std::ostream& out, const Model& model) {
  ordered_json doc;
  doc["format"] = kModelFormat;
  ordered_json space;
  space["dim"] = model.space.dim();
  space["two_bit_state"] = model.space.options().two_bit_state;
  space["event_conjunctions"] = model.space.options().event_conjunctions;
  space["event_types"] = model.space.event_types();
  space["vocabulary"] = model.space.vocabulary();
  space["ground_predicates"] = model.space.ground_predicates();
  doc["feature_space"] = std::move(space);
  doc["theta"] = model.theta;
  doc["config"] = internal::ToJson(model.config);
  doc["iterations_run"] = model.iterations_run;
  doc["converged"] = model.converged;
  doc["final_delta"] = model.final_delta;
  ordered_json log = ordered_json::array();
  for (const IterationRecord& r : model.log) {
    ordered_json e;
    e["k"] = r.k;
    e["delta"] = r.delta;
    if (r.label_f1) e["label_f1"] = *r.label_f1;
    e["n_examples"] = r.n_examples;
    e["n_positives"] = r.n_positives;
    e["n_trained"] = r.n_trained;
    e["gd_epochs"] = r.gd_epochs;
    log.push_back(std::move(e));
  }
  doc["iterations"] = std::move(log);
  out << doc.dump(1) << '\n';
}

Model ReadModel(std::istream& in, const Domain& domain,
                std::string_view source) {
  const std::string where(source);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, where + ": " + e.what());
  }
  try {
    if (doc.value("format", "") != kModelFormat) {
      throw Error(ErrorCode::kParseError,
                  where + ": not an item model (missing format tag)");
    }
    Model model;
    const json& space = doc.at("feature_space");
    model.space = FeatureSpace(
        domain, space.at("event_types").get<std::vector<std::string>>(),
        space.at("vocabulary").get<std::vector<std::string>>(),
        space.at("ground_predicates").get<std::vector<std::string>>(),
        FeatureOptions{space.at("two_bit_state").get<bool>(),
                       space.at("event_conjunctions").get<bool>()});
    model.theta = doc.at("theta").get<std::vector<double>>();
    if (model.theta.size() != model.space.dim() ||
        space.at("dim").get<std::size_t>() != model.space.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  where + ": theta has " + std::to_string(model.theta.size()) +
                      " entries, feature space has " +
                      std::to_string(model.space.dim()));
    }
    internal::Apply(doc.at("config"), &model.config, where + ".config");
    model.iterations_run = doc.at("iterations_run").get<std::size_t>();
    model.converged = doc.at("converged").get<bool>();
    model.final_delta = doc.at("final_delta").get<double>();
    for (const json& e : doc.at("iterations")) {
      IterationRecord r;
      r.k = e.at("k").get<std::size_t>();
      r.delta = e.at("delta").get<double>();
      if (e.contains("label_f1")) r.label_f1 = e.at("label_f1").get<double>();
      r.n_examples = e.value("n_examples", std::size_t{0});
      r.n_positives = e.value("n_positives", std::size_t{0});
      r.n_trained = e.value("n_trained", std::size_t{0});
      r.gd_epochs = e.value("gd_epochs", std::size_t{0});
      model.log.push_back(r);
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, where + ": " + e.what());
  }
}

void WriteTrainingCurve(std::ostream& out, const Model& model) {
  out << "iteration,delta,label_f1\n";
  for (const IterationRecord& r : model.log) {
    out << r.k << ',' << FormatFixed(r.delta) << ','
        << (r.label_f1 ? FormatFixed(*r.label_f1) : std::string()) << '\n';
  }
}

}  // namespace item
