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

// Per-agent control laws. Inputs are relative measurements q_j - q_i in any
// frame; because every gain block is a scaled rotation, the output is
// expressed in that same frame.

#ifndef FORMATION_CONTROLLERS_H_
#define FORMATION_CONTROLLERS_H_

#include <optional>
#include <span>
#include <vector>

#include "formation/formation.h"
#include "formation/gain_matrix.h"
#include "formation/gain_solver.h"

namespace formation {

struct RelativeMeasurement {
  int j = 0;
  Vec2 offset = Vec2::Zero();  // q_j - q_i
};

// Rotation by alpha.
Mat2 Rotation(double alpha);

// u_i = sum_j A_ij (q_j - q_i).
Vec2 SingleIntegratorControl(std::span<const RelativeMeasurement> relative,
                             std::span<const NeighborGain> gains);

// c R(alpha) u. Requires c > 0 and |alpha| < pi/2.
Vec2 PerturbControl(const Vec2& u, double c, double alpha);

Vec2 SaturateNorm(const Vec2& u, double u_max);

struct IntegralState {
  Vec2 accumulator = Vec2::Zero();
  Vec2 last_term = Vec2::Zero();
  bool started = false;
};

struct IntegralControlResult {
  Vec2 u = Vec2::Zero();
  IntegralState state;
};

// u = k0 * term + k1 * integral(term), the integral advanced by dt with the
// trapezoid rule. The first call only records the term.
IntegralControlResult IntegralControl(
    std::span<const RelativeMeasurement> relative,
    std::span<const NeighborGain> gains, const IntegralState& state, double dt,
    double k0, double k1);

struct ChainMeasurement {
  int j = 0;
  // relative[l] = q_j^(l) - q_i^(l); entries past index 0 are only needed by
  // the full_A variant.
  std::vector<Vec2> relative;
};

// own_derivatives holds q_i', ..., q_i^(m); k holds k_0, ..., k_m.
Vec2 HigherOrderControl(std::span<const ChainMeasurement> relative,
                        std::span<const Vec2> own_derivatives,
                        std::span<const NeighborGain> gains,
                        std::span<const double> k, HigherOrderVariant variant);

struct VelocityCommand {
  double v = 0.0;
  double omega = 0.0;
};

struct ActuatorCommand {
  double s = 0.0;
  double r = 0.0;
};

enum class ActuatorMode { kDirect, kVelocityFeedback };
enum class DriveType { kFront, kRear };

// v = h^T u, omega = h_perp^T u.
VelocityCommand UnicycleControl(const Vec2& heading, const Vec2& u);

ActuatorCommand UnicycleActuatorControl(const Vec2& heading, const Vec2& u,
                                        double v_current, ActuatorMode mode,
                                        std::optional<double> k_s);

// Rear drive scales the speed command by cos(phi).
VelocityCommand CarControl(const Vec2& steering, const Vec2& u, DriveType drive,
                           double phi);

ActuatorCommand CarActuatorControl(const Vec2& steering, const Vec2& u,
                                   double v_current, ActuatorMode mode,
                                   std::optional<double> k_s);

enum class ScaleFunction { kAtan, kTanh };

struct DesiredDistance {
  int j = 0;
  double d_star = 0.0;
};

double ScaleTerm(double x, ScaleFunction f, double k_f);

// Adds f(|q_j - q_i| - d*_ij) (q_j - q_i) per neighbor.
Vec2 ScaleAugmentedControl(std::span<const RelativeMeasurement> relative,
                           std::span<const NeighborGain> gains,
                           std::span<const DesiredDistance> d_star,
                           ScaleFunction f, double k_f);

struct Perturbation {
  double c = 1.0;
  double alpha = 0.0;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct EdgeDistance {
  Edge edge;
  double d_star = 0.0;

  friend bool operator==(const EdgeDistance&, const EdgeDistance&) = default;
};

struct ScaleConfig {
  std::vector<EdgeDistance> d_star;
  ScaleFunction f = ScaleFunction::kTanh;
  double k_f = 1.0;

  friend bool operator==(const ScaleConfig&, const ScaleConfig&) = default;
};

struct ControllerConfig {
  std::optional<double> u_max;
  std::optional<double> v_max;
  std::optional<double> omega_max;
  std::optional<double> phi_max;
  std::vector<double> k_chain;
  HigherOrderVariant chain_variant = HigherOrderVariant::kIdentityDerivatives;
  std::optional<double> k0_int;
  std::optional<double> k1_int;
  ActuatorMode mode = ActuatorMode::kDirect;
  std::optional<double> k_s;
  std::optional<ScaleConfig> scale;
  // Empty: no perturbation. Otherwise one entry per agent.
  std::vector<Perturbation> perturbation;

  friend bool operator==(const ControllerConfig&,
                         const ControllerConfig&) = default;
};

// Checks the invariants above; throws a configuration or guarantee error.
void ValidateControllerConfig(const ControllerConfig& config);

}  // namespace formation

#endif  // FORMATION_CONTROLLERS_H_
