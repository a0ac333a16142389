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

// Vector fields of the agent models. Each Deriv* returns a value of the state
// type whose numeric fields hold time derivatives; structural fields (order,
// flags, wheelbase) are copied from the input.

#ifndef FORMATION_DYNAMICS_H_
#define FORMATION_DYNAMICS_H_

#include <optional>
#include <variant>
#include <vector>

#include "formation/controllers.h"
#include "formation/formation.h"

namespace formation {

struct SingleIntegratorState {
  Vec2 q = Vec2::Zero();
};

struct ChainState {
  // derivatives[0] = q, derivatives[l] = q^(l), l = 1..m.
  std::vector<Vec2> derivatives;

  int order() const { return static_cast<int>(derivatives.size()) - 1; }
};

struct UnicycleState {
  Vec2 q = Vec2::Zero();
  double theta = 0.0;
  double v = 0.0;
  double omega = 0.0;
  bool kinematic_only = true;

  Vec2 heading() const;
};

struct CarState {
  Vec2 q = Vec2::Zero();  // front-axle center
  double theta = 0.0;
  double phi = 0.0;
  double v = 0.0;
  double omega = 0.0;
  double wheelbase = 1.0;
  DriveType drive = DriveType::kFront;
  bool kinematic_only = true;

  // Unit vector along theta + phi.
  Vec2 steering() const;
};

using AgentState =
    std::variant<SingleIntegratorState, ChainState, UnicycleState, CarState>;

struct ActuatorParams {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;

  friend bool operator==(const ActuatorParams&, const ActuatorParams&) = default;
};

// Bounds applied to the two scalar inputs before they enter the vector field.
struct InputLimits {
  std::optional<double> v_max;
  std::optional<double> omega_max;
};

double Clamp(double value, std::optional<double> bound);

SingleIntegratorState DerivSingleIntegrator(const SingleIntegratorState& state,
                                            const Vec2& u);

ChainState DerivChain(const ChainState& state, const Vec2& u, int m);

// Kinematic: inputs are (v, omega). Dynamic: inputs are (s, r).
UnicycleState DerivUnicycle(const UnicycleState& state, double input_1,
                            double input_2, const ActuatorParams& params,
                            const InputLimits& limits);

// Rear drive: input_1 is the rear-wheel speed (or its actuator command), and
// the front speed is v / cos(phi), zero when cos(phi) vanishes.
CarState DerivCar(const CarState& state, double input_1, double input_2,
                  const ActuatorParams& params, const InputLimits& limits,
                  std::optional<double> phi_max);

// Driving speed of the front axle implied by the state.
double FrontSpeed(const CarState& state, double commanded);

}  // namespace formation

#endif  // FORMATION_DYNAMICS_H_
