// Copyright 2026 The qpc Authors
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

#include "qpc/error.h"

namespace qpc {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonHermitian: return "NonHermitian";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kNonPhysicalInput: return "NonPhysicalInput";
    case ErrorCode::kUnknownGate: return "UnknownGate";
    case ErrorCode::kInvalidTime: return "InvalidTime";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kIncompleteGrid: return "IncompleteGrid";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kZeroTrace: return "ZeroTrace";
    case ErrorCode::kTriadInvalid: return "TriadInvalid";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kShotMismatch: return "ShotMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace qpc
