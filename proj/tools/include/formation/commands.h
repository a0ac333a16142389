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

// Command implementations behind the `formation` executable.
//
// Exit codes:
//   design    0 gains verified, 1 parse or I/O error, 2 infeasible or unverified
//   simulate  0 converged, 1 parse or I/O error, 2 gains rejected, 3 not converged
//   verify    0 pass, 1 parse or I/O error, 2 fail
//   demo      as design, then as simulate; 1 for an unknown name

#ifndef FORMATION_COMMANDS_H_
#define FORMATION_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "formation/gains_io.h"
#include "formation/simulation.h"

namespace formation {

enum ExitCode {
  kExitOk = 0,
  kExitInput = 1,
  kExitRejected = 2,
  kExitNotConverged = 3,
};

struct GlobalOptions {
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_final;
};

// Solver settings from the command line; unset fields keep the scenario's.
struct DesignFlags {
  std::optional<double> trace_budget;
  std::optional<int> max_iterations;
  std::optional<double> tolerance;
  std::optional<std::string> algorithm;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void ApplyOverrides(const GlobalOptions& global, Scenario* scenario);

// Designs gains for every topology (jointly when there are several) and
// attaches spectrum reports. Throws on infeasibility.
GainsDocument DesignScenario(const Scenario& scenario);

int CmdDesign(const std::string& scenario_path, const std::string& out_path,
              const DesignFlags& flags, const GlobalOptions& global, Streams io);

int CmdSimulate(const std::string& scenario_path, const std::string& gains_path,
                const std::string& csv_path, const std::optional<std::string>& svg_path,
                const GlobalOptions& global, Streams io);

int CmdVerify(const std::string& gains_path, const std::string& scenario_path,
              const GlobalOptions& global, Streams io);

// Writes <name>.json, <name>_gains.json, <name>.csv and <name>.svg into
// directory, then designs and simulates.
int CmdDemo(const std::string& name, const std::string& directory,
            const GlobalOptions& global, Streams io);

}  // namespace formation

#endif  // FORMATION_COMMANDS_H_
