// Copyright 2026 The addrmatch Authors.
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

#ifndef ADDRMATCH_ERROR_H_
#define ADDRMATCH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace addrmatch {

enum class ErrorCode {
  kIo,
  kMalformedRow,
  kUnknownColumn,
  kEmptyFile,
  kUnparsableAddress,
  kEmptyCorpus,
  kVersionMismatch,
  kCorruptFile,
  kUnknownDoc,
  kInvalidJudgment,
  kEmptyJudgments,
  kEmptyCandidates,
  kDegenerateGaps,
  kOutOfRange,
  kNoCandidates,
  kEmptyPairs,
  kEmptyGrid,
  kInvalidConfig,
};

// Stable name of an error code, e.g. "MalformedRow".
std::string_view error_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
// Callers that need to distinguish user-input problems from bugs switch on
// code(); anything that is not an Error is an internal failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace addrmatch

#endif  // ADDRMATCH_ERROR_H_
