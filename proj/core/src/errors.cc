// Copyright 2026 The Formation Authors
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

#include "formation/errors.h"

#include <string>

namespace formation {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kDegenerateFormation: return "degenerate-formation";
    case ErrorCode::kTooFewAgents: return "too-few-agents";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kInfeasibleTopology: return "infeasible-topology";
    case ErrorCode::kJointInfeasibility: return "joint-infeasibility";
    case ErrorCode::kSolverFailure: return "solver-failure";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kGuaranteeViolation: return "guarantee-violation";
    case ErrorCode::kNormalization: return "normalization";
    case ErrorCode::kMeasurementAvailability: return "measurement-availability";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + " error: " +
                         message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace formation
