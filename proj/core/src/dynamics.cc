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

#include "formation/dynamics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "formation/errors.h"

namespace formation {

Vec2 UnicycleState::heading() const {
  return Vec2(std::cos(theta), std::sin(theta));
}

Vec2 CarState::steering() const {
  return Vec2(std::cos(theta + phi), std::sin(theta + phi));
}

double Clamp(double value, std::optional<double> bound) {
  if (!bound) return value;
  return std::clamp(value, -*bound, *bound);
}

SingleIntegratorState DerivSingleIntegrator(const SingleIntegratorState&,
                                            const Vec2& u) {
  return {u};
}

ChainState DerivChain(const ChainState& state, const Vec2& u, int m) {
  if (m < 1 || state.order() != m) {
    Fail(ErrorCode::kDimension,
         "chain state of order " + std::to_string(state.order()) +
             " evaluated as order " + std::to_string(m));
  }
  ChainState out;
  out.derivatives.resize(m + 1);
  for (int l = 0; l < m; ++l) out.derivatives[l] = state.derivatives[l + 1];
  out.derivatives[m] = u;
  return out;
}

UnicycleState DerivUnicycle(const UnicycleState& state, double input_1,
                            double input_2, const ActuatorParams& params,
                            const InputLimits& limits) {
  UnicycleState out;
  out.kinematic_only = state.kinematic_only;
  const double s = Clamp(input_1, limits.v_max);
  const double r = Clamp(input_2, limits.omega_max);
  if (state.kinematic_only) {
    out.q = state.heading() * s;
    out.theta = r;
    return out;
  }
  out.q = state.heading() * state.v;
  out.theta = state.omega;
  out.v = -params.a * state.v + params.b * s;
  out.omega = -params.c * state.omega + params.d * r;
  return out;
}

double FrontSpeed(const CarState& state, double commanded) {
  if (state.drive == DriveType::kFront) return commanded;
  const double c = std::cos(state.phi);
  if (std::abs(c) < 1e-9) return 0.0;
  return commanded / c;
}

CarState DerivCar(const CarState& state, double input_1, double input_2,
                  const ActuatorParams& params, const InputLimits& limits,
                  std::optional<double> phi_max) {
  if (!(state.wheelbase > 0.0)) {
    Fail(ErrorCode::kConfiguration, "wheelbase must be positive");
  }
  CarState out;
  out.wheelbase = state.wheelbase;
  out.drive = state.drive;
  out.kinematic_only = state.kinematic_only;
  const double s = Clamp(input_1, limits.v_max);
  const double r = Clamp(input_2, limits.omega_max);
  double speed = 0.0;
  double steer_rate = 0.0;
  if (state.kinematic_only) {
    speed = FrontSpeed(state, s);
    steer_rate = r;
  } else {
    speed = FrontSpeed(state, state.v);
    steer_rate = state.omega;
    out.v = -params.a * state.v + params.b * s;
    out.omega = -params.c * state.omega + params.d * r;
  }
  out.q = state.steering() * speed;
  out.theta = speed / state.wheelbase * std::sin(state.phi);
  if (phi_max && ((state.phi >= *phi_max && steer_rate > 0.0) ||
                  (state.phi <= -*phi_max && steer_rate < 0.0))) {
    steer_rate = 0.0;
  }
  out.phi = steer_rate;
  return out;
}

}  // namespace formation
