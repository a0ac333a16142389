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

// Fixed-step closed-loop simulation.
//
// Each step: pick the topology active at the step start, decide collision
// avoidance for every agent from the step-start state, then take one RK4 step
// with those decisions held. Controls are computed in each agent's own frame
// and rotated back.

#ifndef FORMATION_SIMULATION_H_
#define FORMATION_SIMULATION_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "formation/collision.h"
#include "formation/controllers.h"
#include "formation/dynamics.h"
#include "formation/formation.h"
#include "formation/gain_matrix.h"
#include "formation/gain_solver.h"

namespace formation {

enum class DynamicsClass { kSingleIntegrator, kChain, kUnicycle, kCar };

std::string DynamicsName(DynamicsClass dynamics);

struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const UniformRange&, const UniformRange&) = default;
};

struct AgentModel {
  DynamicsClass dynamics = DynamicsClass::kSingleIntegrator;
  int chain_order = 1;
  bool kinematic_only = true;
  DriveType drive = DriveType::kFront;
  double wheelbase = 1.0;
  // Per-agent actuator parameters; when empty and actuator_range is set, each
  // of a, b, c, d is drawn uniformly from the range.
  std::vector<ActuatorParams> actuators;
  std::optional<UniformRange> actuator_range;

  friend bool operator==(const AgentModel&, const AgentModel&) = default;
};

struct ScheduleEntry {
  double time = 0.0;
  int topology = 0;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct InitialStateSpec {
  // Explicit positions; when empty, positions are drawn from the box.
  std::vector<Vec2> positions;
  // Headings for unicycles and cars; drawn from [-pi, pi) when empty.
  std::vector<double> headings;
  UniformRange box{-5.0, 5.0};
  // Rejection sampling keeps random agents at least this far apart.
  double min_separation = 0.0;

  friend bool operator==(const InitialStateSpec&,
                         const InitialStateSpec&) = default;
};

struct PerturbationRange {
  UniformRange c{1.0, 1.0};
  UniformRange alpha{0.0, 0.0};

  friend bool operator==(const PerturbationRange&,
                         const PerturbationRange&) = default;
};

struct SimConfig {
  double dt = 0.01;
  double t_final = 60.0;
  std::uint64_t seed = 42;
  InitialStateSpec initial;
  // Half-width of uniform noise on each relative measurement.
  double noise_amplitude = 0.0;
  // Constant input disturbance per agent (single integrators).
  std::vector<Vec2> disturbance;
  bool local_frames = true;
  double convergence_threshold = 1e-3;
  double sustain_time = 1.0;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct Scenario {
  std::string name;
  FormationSpec formation;
  std::vector<std::string> topology_names;
  std::vector<SensingGraph> topologies;
  std::vector<ScheduleEntry> schedule;
  AgentModel agents;
  ControllerConfig controller;
  std::optional<PerturbationRange> random_perturbation;
  std::optional<AvoidanceConfig> avoidance;
  SolverOptions design;
  SimConfig sim;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws a configuration error describing the first problem found.
void ValidateScenario(const Scenario& scenario);

int ActiveTopology(const std::vector<ScheduleEntry>& schedule, double t);

// Seeded quantities of a scenario, drawn in a fixed order from one
// generator: positions, headings, actuator parameters, perturbations, local
// frame angles.
struct ResolvedScenario {
  std::vector<AgentState> initial;
  std::vector<ActuatorParams> actuators;
  std::vector<Perturbation> perturbation;
  std::vector<double> frame_angles;
};

ResolvedScenario Resolve(const Scenario& scenario);

// Stacked positions of resolved initial states.
Vector InitialPositions(const ResolvedScenario& resolved);

// Number of doubles per agent in the flat state vector.
int StateWidth(const AgentModel& model);

struct TrajectoryLog {
  DynamicsClass dynamics = DynamicsClass::kSingleIntegrator;
  int num_agents = 0;
  int state_width = 2;
  int chain_order = 0;
  bool kinematic_only = true;
  std::uint64_t seed = 0;
  double dt = 0.0;
  // 1 / b_i per agent for the composite Lyapunov function; empty otherwise.
  std::vector<double> velocity_weights;

  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> commands;
  std::vector<FormationMetrics> metrics;
  std::vector<int> topology;

  double final_subspace_error = 0.0;
  double min_distance = 0.0;
  int lyapunov_violations = 0;
  bool converged = false;
  double convergence_time = 0.0;
  double wall_seconds = 0.0;

  Vector Positions(size_t step) const;
};

// Gain count, size and sparsity against the scenario's topologies, the
// spectrum checks, and for chains the Hurwitz check. Throws a guarantee
// violation (or configuration/dimension error) describing the failure.
void CheckScenarioGains(const Scenario& scenario,
                        const std::vector<GainMatrix>& gains);

struct RunOptions {
  // Refuse to run unless every gain passes the spectrum checks.
  bool verify = true;
};

TrajectoryLog Run(const Scenario& scenario, const std::vector<GainMatrix>& gains,
                  const RunOptions& options = {});

struct LyapunovReport {
  bool applicable = true;
  bool composite = false;
  int violations = 0;
  int worst_step = -1;
  double worst_increment = 0.0;
};

// Compares V(x_{k+1}) with V(x_k) under the gain active during step k.
LyapunovReport LyapunovMonitor(const TrajectoryLog& log,
                               const std::vector<GainMatrix>& gains,
                               double relative_tolerance = 1e-7);

// Lyapunov value of one logged step under gain matrix a.
double StepLyapunovValue(const TrajectoryLog& log, size_t step, const Matrix& a);

// CSV with a leading "# ..." line carrying the seed.
void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& out);
std::vector<std::string> TrajectoryColumns(const TrajectoryLog& log);

}  // namespace formation

#endif  // FORMATION_SIMULATION_H_
