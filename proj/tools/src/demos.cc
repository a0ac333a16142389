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

#include "formation/demos.h"

#include <cmath>
#include <numbers>
#include <utility>

namespace formation {
namespace {

constexpr double kPi = std::numbers::pi;

SensingGraph FromPairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  for (const auto& [i, j] : pairs) edges.push_back({i, j});
  return SensingGraph(n, edges);
}

Scenario Base(const std::string& name, FormationSpec formation) {
  Scenario s;
  s.name = name;
  s.formation = std::move(formation);
  s.schedule = {{0.0, 0}};
  s.sim.seed = 42;
  return s;
}

Scenario Hexagon() {
  Scenario s = Base("hexagon", HexagonFormation());
  s.topology_names = {"cycle"};
  s.topologies = {SensingGraph::Cycle(6)};
  s.avoidance = AvoidanceConfig{0.2, 0.8};
  s.sim.t_final = 60.0;
  s.sim.initial.box = {-5.0, 5.0};
  s.sim.initial.min_separation = 0.5;
  return s;
}

Scenario Grid9() {
  Scenario s = Base("grid9", GridFormation());
  s.topology_names = {"complete"};
  s.topologies = {SensingGraph::Complete(9)};
  s.avoidance = AvoidanceConfig{0.25, 1.0};
  s.sim.t_final = 60.0;
  s.sim.initial.box = {-5.0, 5.0};
  s.sim.initial.min_separation = 0.5;
  return s;
}

Scenario Triangle() {
  Scenario s = Base("triangle", TriangleFormation());
  s.topology_names = {"triangle"};
  s.topologies = {TriangleGraph()};
  s.avoidance = AvoidanceConfig{0.2, 0.8};
  s.sim.t_final = 60.0;
  s.sim.initial.box = {-5.0, 5.0};
  s.sim.initial.min_separation = 0.5;
  return s;
}

// Shared by the nonholonomic and chain demos: the grid, four switching
// topologies, and large-scale collision parameters.
Scenario SwitchingGrid(const std::string& name) {
  Scenario s = Base(name, GridFormation());
  s.topology_names = {"T1", "T2", "T3", "T4"};
  s.topologies = SwitchingTopologies();
  s.schedule = SwitchingSchedule();
  s.avoidance = AvoidanceConfig{4.0, 8.0};
  s.sim.initial.box = {-40.0, 40.0};
  s.sim.initial.min_separation = 6.0;
  s.sim.convergence_threshold = 1e-2;
  return s;
}

Scenario Unicycle9() {
  Scenario s = SwitchingGrid("unicycle9");
  s.agents.dynamics = DynamicsClass::kUnicycle;
  s.agents.kinematic_only = false;
  s.agents.actuator_range = UniformRange{5.0, 10.0};
  s.controller.v_max = 3.0;
  s.controller.omega_max = kPi / 4;
  s.sim.t_final = 80.0;
  return s;
}

Scenario Car9() {
  Scenario s = SwitchingGrid("car9");
  s.agents.dynamics = DynamicsClass::kCar;
  s.agents.kinematic_only = false;
  s.agents.actuator_range = UniformRange{5.0, 10.0};
  s.agents.drive = DriveType::kFront;
  // Small next to the grid spacing the runs settle at (about 15).
  s.agents.wheelbase = 0.5;
  s.controller.v_max = 3.0;
  s.controller.omega_max = kPi / 4;
  s.controller.phi_max = kPi / 4;
  s.sim.t_final = 80.0;
  return s;
}

Scenario Switching9() {
  Scenario s = SwitchingGrid("switching9");
  s.agents.dynamics = DynamicsClass::kChain;
  s.agents.chain_order = 3;
  s.controller.k_chain = {2.0, 2.0, 3.0, 3.0};
  s.controller.chain_variant = HigherOrderVariant::kIdentityDerivatives;
  // Keeps every nonzero eigenvalue inside the range where k is Hurwitz.
  s.design.trace_budget = -2.0;
  s.sim.t_final = 300.0;
  s.sim.convergence_threshold = 1e-3;
  return s;
}

}  // namespace

FormationSpec HexagonFormation() {
  Vector c(12);
  for (int i = 0; i < 6; ++i) {
    c[2 * i] = std::cos(kPi * i / 3);
    c[2 * i + 1] = std::sin(kPi * i / 3);
  }
  return FormationSpec(c);
}

FormationSpec GridFormation() {
  Vector c(18);
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) {
      const int i = 3 * r + col;
      c[2 * i] = col;
      c[2 * i + 1] = -r;
    }
  }
  return FormationSpec(c);
}

FormationSpec TriangleFormation() {
  const double h = std::sqrt(3.0);
  Vector c(12);
  c << 0.0, 0.0, 2.0, 0.0, 1.0, h, 1.0, 0.0, 1.5, h / 2, 0.5, h / 2;
  return FormationSpec(c);
}

SensingGraph TriangleGraph() {
  // Outer ring through corners and midpoints, plus the inner triangle.
  return FromPairs(6, {{0, 3}, {3, 1}, {1, 4}, {4, 2}, {2, 5}, {5, 0},
                       {3, 4}, {4, 5}, {5, 3}});
}

std::vector<SensingGraph> SwitchingTopologies() {
  return {
      FromPairs(9, {{0, 1}, {0, 3}, {1, 3}, {1, 4}, {1, 5}, {1, 7}, {1, 8},
                    {2, 3}, {2, 4}, {2, 5}, {2, 8}, {3, 4}, {3, 6}, {3, 7},
                    {4, 5}, {4, 7}, {6, 7}, {6, 8}, {7, 8}}),
      FromPairs(9, {{0, 1}, {0, 4}, {1, 2}, {1, 4}, {1, 5}, {1, 7}, {1, 8},
                    {2, 3}, {2, 5}, {2, 6}, {2, 7}, {3, 4}, {3, 5}, {3, 6},
                    {3, 7}, {4, 6}, {5, 6}, {5, 7}, {7, 8}}),
      FromPairs(9, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {2, 5},
                    {2, 6}, {2, 8}, {3, 4}, {3, 6}, {4, 5}, {4, 7}, {5, 6},
                    {5, 7}, {7, 8}}),
      FromPairs(9, {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 5}, {1, 8},
                    {2, 4}, {2, 5}, {2, 7}, {2, 8}, {3, 6}, {3, 7}, {4, 5},
                    {4, 6}, {4, 7}, {4, 8}, {5, 6}, {5, 8}, {6, 7}, {6, 8},
                    {7, 8}}),
  };
}

std::vector<ScheduleEntry> SwitchingSchedule() {
  return {{0.0, 0},  {8.0, 1},  {15.0, 2}, {24.0, 3}, {33.0, 0},
          {41.0, 2}, {50.0, 1}, {60.0, 3}, {70.0, 0}};
}

std::vector<std::string> DemoNames() {
  return {"triangle", "hexagon", "grid9", "unicycle9", "car9", "switching9"};
}

std::optional<Scenario> MakeDemo(const std::string& name) {
  if (name == "triangle") return Triangle();
  if (name == "hexagon") return Hexagon();
  if (name == "grid9") return Grid9();
  if (name == "unicycle9") return Unicycle9();
  if (name == "car9") return Car9();
  if (name == "switching9") return Switching9();
  return std::nullopt;
}

}  // namespace formation
