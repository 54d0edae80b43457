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

#include "item/error.hpp"

namespace item {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return "OK";
    case ErrorCode::kInvalidArgument:
      return "INVALID_ARGUMENT";
    case ErrorCode::kIoError:
      return "IO_ERROR";
    case ErrorCode::kParseError:
      return "PARSE_ERROR";
    case ErrorCode::kInvalidDomain:
      return "INVALID_DOMAIN";
    case ErrorCode::kUnknownEventType:
      return "UNKNOWN_EVENT_TYPE";
    case ErrorCode::kUnknownConstant:
      return "UNKNOWN_CONSTANT";
    case ErrorCode::kUnknownPredicate:
      return "UNKNOWN_PREDICATE";
    case ErrorCode::kMissingBinding:
      return "MISSING_BINDING";
    case ErrorCode::kArityMismatch:
      return "ARITY_MISMATCH";
    case ErrorCode::kEmptyCorpus:
      return "EMPTY_CORPUS";
    case ErrorCode::kDimensionMismatch:
      return "DIMENSION_MISMATCH";
    case ErrorCode::kNonFiniteWeight:
      return "NON_FINITE_WEIGHT";
    case ErrorCode::kNoPositives:
      return "NO_POSITIVES";
    case ErrorCode::kDivergence:
      return "DIVERGENCE";
    case ErrorCode::kInvalidConfig:
      return "INVALID_CONFIG";
    case ErrorCode::kEmptyNarrative:
      return "EMPTY_NARRATIVE";
    case ErrorCode::kTooLarge:
      return "TOO_LARGE";
    case ErrorCode::kLengthMismatch:
      return "LENGTH_MISMATCH";
    case ErrorCode::kModelNotFound:
      return "MODEL_NOT_FOUND";
    case ErrorCode::kFileNotFound:
      return "FILE_NOT_FOUND";
    case ErrorCode::kInternal:
      return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace item
