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

#ifndef ITEM_ERROR_HPP_
#define ITEM_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace item {

// Stable error codes. The numeric values are part of the C API and must not
// be reordered.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIoError = 2,
  kParseError = 3,
  kInvalidDomain = 4,
  kUnknownEventType = 5,
  kUnknownConstant = 6,
  kUnknownPredicate = 7,
  kMissingBinding = 8,
  kArityMismatch = 9,
  kEmptyCorpus = 10,
  kDimensionMismatch = 11,
  kNonFiniteWeight = 12,
  kNoPositives = 13,
  kDivergence = 14,
  kInvalidConfig = 15,
  kEmptyNarrative = 16,
  kTooLarge = 17,
  kLengthMismatch = 18,
  kModelNotFound = 19,
  kFileNotFound = 20,
  kInternal = 21,
};

// Upper-case symbolic name, e.g. "MODEL_NOT_FOUND".
const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const { return code_; }
  // 1-based source line, 0 if not tied to a file position.
  std::size_t line() const { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_ = 0;
};

}  // namespace item

#endif  // ITEM_ERROR_HPP_
