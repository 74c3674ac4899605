// Copyright 2026 The cpayoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpayoff/error.h"

namespace cpayoff {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kRowSumNotOne: return "RowSumNotOne";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTOutOfRange: return "TOutOfRange";
    case ErrorCode::kExhaustedEvaluation: return "ExhaustedEvaluation";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kLadderTooShort: return "LadderTooShort";
    case ErrorCode::kUnstableExponent: return "UnstableExponent";
    case ErrorCode::kNotAbsorbing: return "NotAbsorbing";
    case ErrorCode::kMassOverflow: return "MassOverflow";
    case ErrorCode::kDegenerateWindow: return "DegenerateWindow";
    case ErrorCode::kWindowOutOfRange: return "WindowOutOfRange";
    case ErrorCode::kQuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::kNotCoveredByTheory: return "NotCoveredByTheory";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace cpayoff
