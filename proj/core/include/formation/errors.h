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

#ifndef FORMATION_ERRORS_H_
#define FORMATION_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace formation {

enum class ErrorCode {
  kDimension,
  kDegenerateFormation,
  kTooFewAgents,
  kUndefined,
  kInfeasibleTopology,
  kJointInfeasibility,
  kSolverFailure,
  kConfiguration,
  kGuaranteeViolation,
  kNormalization,
  kMeasurementAvailability,
  kParse,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// command-line driver can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace formation

#endif  // FORMATION_ERRORS_H_
