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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "config_json.hpp"
#include "item/corpus.hpp"
#include "item/decode.hpp"
#include "item/domain_io.hpp"
#include "item/error.hpp"
#include "item/item.h"
#include "item/learn.hpp"
#include "item/pipeline.hpp"
#include "item/simulator.hpp"

struct item_domain {
  item::Domain domain;
};

struct item_corpus {
  const item::Domain* domain;
  std::vector<item::Narrative> narratives;
};

struct item_model {
  item::Model model;
};

namespace {

thread_local std::string g_last_error;

item_status Fail(item::ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<item_status>(code);
}

template <typename F>
item_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ITEM_OK;
  } catch (const item::Error& e) {
    return Fail(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(item::ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return Fail(item::ErrorCode::kInternal, e.what());
  } catch (...) {
    return Fail(item::ErrorCode::kInternal, "unknown failure");
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw item::Error(item::ErrorCode::kInvalidArgument,
                      std::string(what) + " must not be NULL");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

item::internal::json ParseJson(const char* text, const char* where) {
  try {
    return item::internal::json::parse(text);
  } catch (const item::internal::json::parse_error& e) {
    throw item::Error(item::ErrorCode::kParseError,
                      std::string(where) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char* item_version(void) { return "1.0.0"; }

const char* item_status_name(item_status status) {
  if (status < 0 || status > static_cast<int>(item::ErrorCode::kInternal)) {
    return "UNKNOWN";
  }
  return item::ErrorCodeName(static_cast<item::ErrorCode>(status));
}

const char* item_last_error_message(void) { return g_last_error.c_str(); }

void item_string_free(char* s) { std::free(s); }

item_status item_domain_load(const char* path, item_domain** out) {
  return Guard([&] {
    Require(out, "out");
    *out = nullptr;
    auto d = std::make_unique<item_domain>(item_domain{
        path == nullptr ? item::DefaultDomain() : item::LoadDomain(path)});
    *out = d.release();
  });
}

item_status item_domain_parse(const char* text, item_domain** out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    *out = nullptr;
    auto d =
        std::make_unique<item_domain>(item_domain{item::ParseDomain(text)});
    *out = d.release();
  });
}

void item_domain_free(item_domain* domain) { delete domain; }

size_t item_domain_event_count(const item_domain* domain) {
  return domain == nullptr ? 0 : domain->domain.events().size();
}

item_status item_corpus_load(const item_domain* domain, const char* path,
                             const char* aliases_path, item_corpus** out) {
  return Guard([&] {
    Require(domain, "domain");
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    item::AliasTable aliases;
    if (aliases_path != nullptr) aliases = item::AliasTable::Load(aliases_path);
    auto c = std::make_unique<item_corpus>();
    c->domain = &domain->domain;
    c->narratives = item::LoadCorpus(path, domain->domain,
                                     aliases.empty() ? nullptr : &aliases);
    *out = c.release();
  });
}

item_status item_corpus_generate(const item_domain* domain,
                                 const char* simulator_json, size_t n_games,
                                 uint64_t seed, item_corpus** out) {
  return Guard([&] {
    Require(domain, "domain");
    Require(out, "out");
    *out = nullptr;
    item::SimulatorConfig config = item::DefaultSimulatorConfig();
    if (simulator_json != nullptr) {
      item::internal::Apply(ParseJson(simulator_json, "simulator"), &config,
                            "simulator");
    }
    config.seed = seed;
    auto c = std::make_unique<item_corpus>();
    c->domain = &domain->domain;
    for (item::SyntheticGame& g :
         item::GenerateGames(domain->domain, config, n_games)) {
      c->narratives.push_back(std::move(g.narrative));
    }
    *out = c.release();
  });
}

item_status item_corpus_save(const item_corpus* corpus, const char* path) {
  return Guard([&] {
    Require(corpus, "corpus");
    Require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw item::Error(item::ErrorCode::kIoError,
                        std::string("cannot write ") + path);
    }
    item::WriteCorpus(out, corpus->narratives, *corpus->domain);
  });
}

size_t item_corpus_narratives(const item_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->narratives.size();
}

size_t item_corpus_sentences(const item_corpus* corpus) {
  if (corpus == nullptr) return 0;
  size_t n = 0;
  for (const item::Narrative& nar : corpus->narratives) n += nar.size();
  return n;
}

void item_corpus_free(item_corpus* corpus) { delete corpus; }

item_status item_model_train(const item_domain* domain,
                             const item_corpus* corpus, const char* train_json,
                             item_model** out) {
  return Guard([&] {
    Require(domain, "domain");
    Require(corpus, "corpus");
    Require(out, "out");
    *out = nullptr;
    item::TrainConfig config;
    if (train_json != nullptr) {
      item::internal::Apply(ParseJson(train_json, "train"), &config, "train");
    }
    auto m = std::make_unique<item_model>(item_model{
        item::IterTrain(corpus->narratives, domain->domain, config)});
    *out = m.release();
  });
}

item_status item_model_load(const item_domain* domain, const char* path,
                            item_model** out) {
  return Guard([&] {
    Require(domain, "domain");
    Require(path, "path");
    Require(out, "out");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw item::Error(item::ErrorCode::kModelNotFound,
                        std::string("cannot open model file ") + path);
    }
    auto m = std::make_unique<item_model>(
        item_model{item::ReadModel(in, domain->domain, path)});
    *out = m.release();
  });
}

item_status item_model_save(const item_model* model, const char* path) {
  return Guard([&] {
    Require(model, "model");
    Require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw item::Error(item::ErrorCode::kIoError,
                        std::string("cannot write ") + path);
    }
    item::WriteModel(out, model->model);
  });
}

size_t item_model_dim(const item_model* model) {
  return model == nullptr ? 0 : model->model.space.dim();
}

size_t item_model_iterations(const item_model* model) {
  return model == nullptr ? 0 : model->model.iterations_run;
}

int item_model_converged(const item_model* model) {
  return model != nullptr && model->model.converged ? 1 : 0;
}

void item_model_free(item_model* model) { delete model; }

item_status item_decode(const item_domain* domain, const item_model* model,
                        const item_corpus* corpus, const char* penalty_json,
                        char** out) {
  return Guard([&] {
    Require(domain, "domain");
    Require(model, "model");
    Require(corpus, "corpus");
    Require(out, "out");
    *out = nullptr;
    item::PenaltyConfig penalty;
    if (penalty_json != nullptr) {
      item::internal::Apply(ParseJson(penalty_json, "penalty"), &penalty,
                            "penalty");
    }
    std::ostringstream text;
    for (const item::Narrative& n : corpus->narratives) {
      const item::DecodeResult r =
          item::Viterbi(n, model->model, domain->domain, penalty);
      item::WriteDecode(text, domain->domain, n, r);
    }
    *out = CopyString(text.str());
  });
}

item_status item_run(const char* command, const char* config_json,
                     char** summary) {
  return Guard([&] {
    Require(command, "command");
    if (summary != nullptr) *summary = nullptr;
    item::RunConfig config;
    config.command = item::ParseCommand(command);
    if (config_json != nullptr) item::ApplyConfigJson(config_json, &config);
    const item::RunSummary result = item::Run(config);
    if (summary != nullptr) *summary = CopyString(result.json);
  });
}

}  // extern "C"
