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

#include "addrmatch/error.h"

namespace addrmatch {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kUnparsableAddress: return "UnparsableAddress";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kUnknownDoc: return "UnknownDoc";
    case ErrorCode::kInvalidJudgment: return "InvalidJudgment";
    case ErrorCode::kEmptyJudgments: return "EmptyJudgments";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kDegenerateGaps: return "DegenerateGaps";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNoCandidates: return "NoCandidates";
    case ErrorCode::kEmptyPairs: return "EmptyPairs";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace addrmatch
