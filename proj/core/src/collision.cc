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

#include "formation/collision.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "formation/controllers.h"
#include "formation/errors.h"

namespace formation {
namespace {

constexpr double kPi = std::numbers::pi;
// Directions this close to a cone edge count as outside.
constexpr double kEdgeSlack = 1e-12;

double Wrap(double angle) {
  angle = std::remainder(angle, 2.0 * kPi);
  if (angle <= -kPi) angle += 2.0 * kPi;
  return angle;
}

double Heading(const Vec2& v) { return std::atan2(v.y(), v.x()); }

bool Inside(double direction, std::span<const CollisionCone> cones) {
  for (const CollisionCone& cone : cones) {
    const double offset = Wrap(direction - Heading(cone.center_dir));
    if (std::abs(offset) < cone.half_angle - kEdgeSlack) return true;
  }
  return false;
}

}  // namespace

void ValidateAvoidanceConfig(const AvoidanceConfig& config) {
  if (!(config.r > 0.0) || !(config.d_c > config.r)) {
    Fail(ErrorCode::kConfiguration, "avoidance needs d_c > r > 0");
  }
}

std::vector<CollisionCone> BuildCones(const Vec2& position,
                                      std::span<const Vec2> others,
                                      const AvoidanceConfig& config) {
  std::vector<CollisionCone> cones;
  for (const Vec2& other : others) {
    const Vec2 delta = other - position;
    const double d = delta.norm();
    // A coincident agent has no direction to avoid.
    if (d == 0.0 || d > config.d_c) continue;
    CollisionCone cone;
    cone.apex = position;
    cone.center_dir = delta / d;
    cone.distance = d;
    cone.half_angle = d <= config.r ? kPi / 2 : std::asin(config.r / d);
    cones.push_back(cone);
  }
  return cones;
}

AvoidanceDecision DecideAvoidance(const Vec2& u,
                                  std::span<const CollisionCone> cones) {
  AvoidanceDecision decision;
  if (u.isZero(0.0) || cones.empty()) return decision;
  const double theta_u = Heading(u);
  if (!Inside(theta_u, cones)) return decision;
  decision.blocked = true;

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (const CollisionCone& cone : cones) {
    const double center = Heading(cone.center_dir);
    for (double sign : {1.0, -1.0}) {
      const double delta = Wrap(center + sign * cone.half_angle - theta_u);
      if (!(std::abs(delta) < kPi / 2)) continue;
      if (Inside(theta_u + delta, cones)) continue;
      const double mag = std::abs(delta);
      // Ties go counterclockwise.
      if (!found || mag < best - kEdgeSlack ||
          (std::abs(mag - best) <= kEdgeSlack && delta > decision.rotation)) {
        best = std::min(best, mag);
        decision.rotation = delta;
        found = true;
      }
    }
  }
  if (!found) {
    decision.stop = true;
    decision.rotation = 0.0;
  }
  return decision;
}

Vec2 ApplyAvoidance(const Vec2& u, const AvoidanceDecision& decision) {
  if (!decision.blocked) return u;
  if (decision.stop) return Vec2::Zero();
  return Rotation(decision.rotation) * u;
}

Vec2 AdjustControl(const Vec2& u, std::span<const CollisionCone> cones,
                   const AvoidanceConfig& config) {
  ValidateAvoidanceConfig(config);
  return ApplyAvoidance(u, DecideAvoidance(u, cones));
}

double AngularMargin(const Vec2& u, std::span<const CollisionCone> cones) {
  double margin = std::numeric_limits<double>::infinity();
  const double theta = Heading(u);
  for (const CollisionCone& cone : cones) {
    const double offset = std::abs(Wrap(theta - Heading(cone.center_dir)));
    margin = std::min(margin, offset - cone.half_angle);
  }
  return margin;
}

}  // namespace formation
