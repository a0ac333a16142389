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

// Column order:
//   t, x_1, y_1, ..., x_n, y_n, <extras of agent 1>, ..., <extras of agent n>,
//   subspace_error, lyapunov_value, min_pairwise_distance
// Extras per agent: chain  dx<l>_i, dy<l>_i for l = 1..m
//                   unicycle theta_i [, v_i, omega_i]
//                   car    theta_i, phi_i [, v_i, omega_i]

#include <cstdio>
#include <ostream>
#include <string>

#include "formation/simulation.h"

namespace formation {
namespace {

std::vector<std::string> ExtraNames(const TrajectoryLog& log) {
  switch (log.dynamics) {
    case DynamicsClass::kSingleIntegrator:
      return {};
    case DynamicsClass::kChain: {
      std::vector<std::string> names;
      for (int l = 1; l <= log.chain_order; ++l) {
        names.push_back("dx" + std::to_string(l));
        names.push_back("dy" + std::to_string(l));
      }
      return names;
    }
    case DynamicsClass::kUnicycle:
      if (log.kinematic_only) return {"theta"};
      return {"theta", "v", "omega"};
    case DynamicsClass::kCar:
      if (log.kinematic_only) return {"theta", "phi"};
      return {"theta", "phi", "v", "omega"};
  }
  return {};
}

void Put(std::ostream& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  out << buf;
}

}  // namespace

std::vector<std::string> TrajectoryColumns(const TrajectoryLog& log) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= log.num_agents; ++i) {
    cols.push_back("x_" + std::to_string(i));
    cols.push_back("y_" + std::to_string(i));
  }
  const auto extras = ExtraNames(log);
  for (int i = 1; i <= log.num_agents; ++i) {
    for (const std::string& e : extras) cols.push_back(e + "_" + std::to_string(i));
  }
  cols.insert(cols.end(), {"subspace_error", "lyapunov_value", "min_pairwise_distance"});
  return cols;
}

void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& out) {
  out << "# seed=" << log.seed << " dt=";
  Put(out, log.dt);
  out << " dynamics=" << DynamicsName(log.dynamics) << " agents=" << log.num_agents
      << "\n";
  const auto cols = TrajectoryColumns(log);
  for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";
  const int extras = log.state_width - 2;
  for (size_t k = 0; k < log.states.size(); ++k) {
    const Vector& x = log.states[k];
    Put(out, log.times[k]);
    for (int i = 0; i < log.num_agents; ++i) {
      out << ",";
      Put(out, x[i * log.state_width]);
      out << ",";
      Put(out, x[i * log.state_width + 1]);
    }
    for (int i = 0; i < log.num_agents; ++i) {
      for (int e = 0; e < extras; ++e) {
        out << ",";
        Put(out, x[i * log.state_width + 2 + e]);
      }
    }
    const FormationMetrics& m = log.metrics[k];
    out << ",";
    Put(out, m.subspace_error);
    out << ",";
    Put(out, m.lyapunov_value);
    out << ",";
    Put(out, m.min_pairwise_distance);
    out << "\n";
  }
}

}  // namespace formation
