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

// Gains documents: per-topology edge gains (1-based agents) with the solver
// metadata and spectrum report that produced them. Doubles are written with
// round-trip precision, so save followed by load is bitwise exact.

#ifndef FORMATION_GAINS_IO_H_
#define FORMATION_GAINS_IO_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "formation/gain_matrix.h"
#include "formation/gain_solver.h"

namespace formation {

inline constexpr int kGainsVersion = 1;

struct TopologyGains {
  std::string name;
  GainMatrix gains;
  SpectrumReport report;
};

struct GainsDocument {
  int n = 0;
  double trace_budget = 0.0;
  SolverInfo solver;
  std::vector<TopologyGains> topologies;

  std::vector<GainMatrix> matrices() const;
};

nlohmann::json GainsToJson(const GainsDocument& doc);
GainsDocument GainsFromJson(const nlohmann::json& j);

GainsDocument LoadGains(const std::string& path);
void SaveGains(const GainsDocument& doc, const std::string& path);

}  // namespace formation

#endif  // FORMATION_GAINS_IO_H_
