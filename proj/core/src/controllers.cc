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

#include "formation/controllers.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "formation/errors.h"

namespace formation {
namespace {

const Mat2* FindGain(std::span<const NeighborGain> gains, int j) {
  for (const NeighborGain& g : gains) {
    if (g.j == j) return &g.block;
  }
  return nullptr;
}

const Mat2& RequireGain(std::span<const NeighborGain> gains, int j) {
  const Mat2* block = FindGain(gains, j);
  if (block == nullptr) {
    Fail(ErrorCode::kConfiguration,
         "no gain block for neighbor " + std::to_string(j + 1));
  }
  return *block;
}

void CheckUnit(const Vec2& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    Fail(ErrorCode::kNormalization,
         std::string(what) + " vector is not unit length");
  }
}

Vec2 Perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

ActuatorCommand ProjectActuator(const Vec2& axis, const Vec2& u,
                                double v_current, ActuatorMode mode,
                                std::optional<double> k_s) {
  const double along = axis.dot(u);
  ActuatorCommand cmd;
  cmd.r = Perp(axis).dot(u);
  if (mode == ActuatorMode::kDirect) {
    cmd.s = along;
  } else {
    if (!k_s) {
      Fail(ErrorCode::kConfiguration, "velocity feedback needs k_s");
    }
    cmd.s = -*k_s * (v_current - along);
  }
  return cmd;
}

}  // namespace

Mat2 Rotation(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Vec2 SingleIntegratorControl(std::span<const RelativeMeasurement> relative,
                             std::span<const NeighborGain> gains) {
  Vec2 u = Vec2::Zero();
  for (const RelativeMeasurement& m : relative) {
    u += RequireGain(gains, m.j) * m.offset;
  }
  return u;
}

Vec2 PerturbControl(const Vec2& u, double c, double alpha) {
  if (!(c > 0.0) || !(std::abs(alpha) < std::numbers::pi / 2)) {
    Fail(ErrorCode::kGuaranteeViolation,
         "perturbation needs c > 0 and |alpha| < pi/2");
  }
  return c * (Rotation(alpha) * u);
}

Vec2 SaturateNorm(const Vec2& u, double u_max) {
  const double norm = u.norm();
  if (norm <= u_max) return u;
  Vec2 out = u * (u_max / norm);
  // Rounding can leave the norm an ulp above u_max; shrink until it is not,
  // so a second application is the identity.
  while (out.norm() > u_max) out *= 1.0 - std::numeric_limits<double>::epsilon();
  return out;
}

IntegralControlResult IntegralControl(
    std::span<const RelativeMeasurement> relative,
    std::span<const NeighborGain> gains, const IntegralState& state, double dt,
    double k0, double k1) {
  if (!(k0 > 0.0) || !(k1 >= 0.0)) {
    Fail(ErrorCode::kGuaranteeViolation,
         "integral control needs k0 > 0 and k1 >= 0");
  }
  const Vec2 term = SingleIntegratorControl(relative, gains);
  IntegralControlResult out;
  out.state = state;
  if (state.started) {
    out.state.accumulator += 0.5 * dt * (state.last_term + term);
  }
  out.state.last_term = term;
  out.state.started = true;
  out.u = k0 * term + k1 * out.state.accumulator;
  return out;
}

Vec2 HigherOrderControl(std::span<const ChainMeasurement> relative,
                        std::span<const Vec2> own_derivatives,
                        std::span<const NeighborGain> gains,
                        std::span<const double> k, HigherOrderVariant variant) {
  const size_t m = own_derivatives.size();
  if (k.size() != m + 1) {
    Fail(ErrorCode::kDimension,
         "chain of order " + std::to_string(m) + " needs " +
             std::to_string(m + 1) + " gains, got " + std::to_string(k.size()));
  }
  Vec2 u = Vec2::Zero();
  for (const ChainMeasurement& meas : relative) {
    if (meas.relative.empty()) {
      Fail(ErrorCode::kMeasurementAvailability,
           "no relative position for neighbor " + std::to_string(meas.j + 1));
    }
    const Mat2& block = RequireGain(gains, meas.j);
    u += k[0] * (block * meas.relative[0]);
    if (variant == HigherOrderVariant::kFullA) {
      if (meas.relative.size() < m + 1) {
        Fail(ErrorCode::kMeasurementAvailability,
             "full_A variant needs relative derivatives of neighbor " +
                 std::to_string(meas.j + 1));
      }
      for (size_t l = 1; l <= m; ++l) {
        u += k[l] * (block * meas.relative[l]);
      }
    }
  }
  if (variant == HigherOrderVariant::kIdentityDerivatives) {
    for (size_t l = 1; l <= m; ++l) u -= k[l] * own_derivatives[l - 1];
  }
  return u;
}

VelocityCommand UnicycleControl(const Vec2& heading, const Vec2& u) {
  CheckUnit(heading, "heading");
  return {heading.dot(u), Perp(heading).dot(u)};
}

ActuatorCommand UnicycleActuatorControl(const Vec2& heading, const Vec2& u,
                                        double v_current, ActuatorMode mode,
                                        std::optional<double> k_s) {
  CheckUnit(heading, "heading");
  return ProjectActuator(heading, u, v_current, mode, k_s);
}

VelocityCommand CarControl(const Vec2& steering, const Vec2& u, DriveType drive,
                           double phi) {
  CheckUnit(steering, "steering");
  VelocityCommand cmd{steering.dot(u), Perp(steering).dot(u)};
  if (drive == DriveType::kRear) cmd.v *= std::cos(phi);
  return cmd;
}

ActuatorCommand CarActuatorControl(const Vec2& steering, const Vec2& u,
                                   double v_current, ActuatorMode mode,
                                   std::optional<double> k_s) {
  CheckUnit(steering, "steering");
  return ProjectActuator(steering, u, v_current, mode, k_s);
}

double ScaleTerm(double x, ScaleFunction f, double k_f) {
  return (f == ScaleFunction::kAtan ? std::atan(x) : std::tanh(x)) / k_f;
}

Vec2 ScaleAugmentedControl(std::span<const RelativeMeasurement> relative,
                           std::span<const NeighborGain> gains,
                           std::span<const DesiredDistance> d_star,
                           ScaleFunction f, double k_f) {
  if (!(k_f > 0.0)) {
    Fail(ErrorCode::kConfiguration, "k_f must be positive");
  }
  Vec2 u = SingleIntegratorControl(relative, gains);
  for (const RelativeMeasurement& m : relative) {
    const DesiredDistance* found = nullptr;
    for (const DesiredDistance& d : d_star) {
      if (d.j == m.j) found = &d;
    }
    if (found == nullptr) {
      Fail(ErrorCode::kConfiguration,
           "no desired distance for neighbor " + std::to_string(m.j + 1));
    }
    u += ScaleTerm(m.offset.norm() - found->d_star, f, k_f) * m.offset;
  }
  return u;
}

void ValidateControllerConfig(const ControllerConfig& config) {
  auto positive = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0)) {
      Fail(ErrorCode::kConfiguration, std::string(name) + " must be positive");
    }
  };
  positive(config.u_max, "u_max");
  positive(config.v_max, "v_max");
  positive(config.omega_max, "omega_max");
  positive(config.phi_max, "phi_max");
  if (config.k0_int && !(*config.k0_int > 0.0)) {
    Fail(ErrorCode::kGuaranteeViolation, "k0_int must be positive");
  }
  if (config.k1_int && !(*config.k1_int >= 0.0)) {
    Fail(ErrorCode::kGuaranteeViolation, "k1_int must be non-negative");
  }
  if (config.mode == ActuatorMode::kVelocityFeedback && !config.k_s) {
    Fail(ErrorCode::kConfiguration, "velocity feedback needs k_s");
  }
  if (config.scale && !(config.scale->k_f > 0.0)) {
    Fail(ErrorCode::kConfiguration, "k_f must be positive");
  }
  for (const Perturbation& p : config.perturbation) {
    if (!(p.c > 0.0) || !(std::abs(p.alpha) < std::numbers::pi / 2)) {
      Fail(ErrorCode::kGuaranteeViolation,
           "perturbation needs c > 0 and |alpha| < pi/2");
    }
  }
}

}  // namespace formation
