// Copyright 2026 The zdrd Authors
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

#include "zdrd/errors.hpp"

namespace zdrd {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kNotPd: return "NotPD";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kInfeasibleModel: return "InfeasibleModel";
    case ErrorCode::kSolverDivergence: return "SolverDivergence";
    case ErrorCode::kBadDistortion: return "BadDistortion";
    case ErrorCode::kOrderViolation: return "OrderViolation";
    case ErrorCode::kAlphabetOverflow: return "AlphabetOverflow";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace zdrd
