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

#ifndef ITEM_ITEM_H_
#define ITEM_ITEM_H_

/* C interface to the ITEM library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible
 * call returns an item_status; on failure a message for the calling thread
 * is available from item_last_error_message(). Strings returned through
 * char** are heap-allocated and released with item_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(ITEM_BUILDING_LIBRARY)
#define ITEM_API __attribute__((visibility("default")))
#else
#define ITEM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int item_status;

enum {
  ITEM_OK = 0,
  ITEM_E_INVALID_ARGUMENT = 1,
  ITEM_E_IO_ERROR = 2,
  ITEM_E_PARSE_ERROR = 3,
  ITEM_E_INVALID_DOMAIN = 4,
  ITEM_E_UNKNOWN_EVENT_TYPE = 5,
  ITEM_E_UNKNOWN_CONSTANT = 6,
  ITEM_E_UNKNOWN_PREDICATE = 7,
  ITEM_E_MISSING_BINDING = 8,
  ITEM_E_ARITY_MISMATCH = 9,
  ITEM_E_EMPTY_CORPUS = 10,
  ITEM_E_DIMENSION_MISMATCH = 11,
  ITEM_E_NON_FINITE_WEIGHT = 12,
  ITEM_E_NO_POSITIVES = 13,
  ITEM_E_DIVERGENCE = 14,
  ITEM_E_INVALID_CONFIG = 15,
  ITEM_E_EMPTY_NARRATIVE = 16,
  ITEM_E_TOO_LARGE = 17,
  ITEM_E_LENGTH_MISMATCH = 18,
  ITEM_E_MODEL_NOT_FOUND = 19,
  ITEM_E_FILE_NOT_FOUND = 20,
  ITEM_E_INTERNAL = 21
};

typedef struct item_domain item_domain;
typedef struct item_corpus item_corpus;
typedef struct item_model item_model;

ITEM_API const char* item_version(void);
/* "OK", "MODEL_NOT_FOUND", ...; "UNKNOWN" for values outside the enum. */
ITEM_API const char* item_status_name(item_status status);
/* Message of the last failure on this thread; "" after a success. */
ITEM_API const char* item_last_error_message(void);
ITEM_API void item_string_free(char* s);

/* path == NULL loads the bundled soccer domain. */
ITEM_API item_status item_domain_load(const char* path, item_domain** out);
ITEM_API item_status item_domain_parse(const char* text, item_domain** out);
ITEM_API void item_domain_free(item_domain* domain);
ITEM_API size_t item_domain_event_count(const item_domain* domain);

/* A corpus refers to its domain, which must outlive it. aliases_path may be
 * NULL. */
ITEM_API item_status item_corpus_load(const item_domain* domain,
                                      const char* path,
                                      const char* aliases_path,
                                      item_corpus** out);
/* simulator_json may be NULL for the bundled templates. */
ITEM_API item_status item_corpus_generate(const item_domain* domain,
                                          const char* simulator_json,
                                          size_t n_games, uint64_t seed,
                                          item_corpus** out);
ITEM_API item_status item_corpus_save(const item_corpus* corpus,
                                      const char* path);
ITEM_API size_t item_corpus_narratives(const item_corpus* corpus);
ITEM_API size_t item_corpus_sentences(const item_corpus* corpus);
ITEM_API void item_corpus_free(item_corpus* corpus);

/* train_json overlays the training defaults and may be NULL. */
ITEM_API item_status item_model_train(const item_domain* domain,
                                      const item_corpus* corpus,
                                      const char* train_json, item_model** out);
ITEM_API item_status item_model_load(const item_domain* domain,
                                     const char* path, item_model** out);
ITEM_API item_status item_model_save(const item_model* model, const char* path);
ITEM_API size_t item_model_dim(const item_model* model);
ITEM_API size_t item_model_iterations(const item_model* model);
ITEM_API int item_model_converged(const item_model* model);
ITEM_API void item_model_free(item_model* model);

/* Decodes every narrative; *out receives the decode JSON lines. penalty_json
 * may be NULL. */
ITEM_API item_status item_decode(const item_domain* domain,
                                 const item_model* model,
                                 const item_corpus* corpus,
                                 const char* penalty_json, char** out);

/* Runs a batch command ("train", "leave-one-out", ...) configured by a JSON
 * document; *summary receives a JSON object naming the artifacts written.
 * summary may be NULL. */
ITEM_API item_status item_run(const char* command, const char* config_json,
                              char** summary);

#ifdef __cplusplus
}
#endif

#endif /* ITEM_ITEM_H_ */
