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

// Collision cones: each nearby agent blocks an open angular interval of
// headings. A blocked command is rotated by the smallest angle that leaves
// every interval, or zeroed when that angle would reach 90 degrees.

#ifndef FORMATION_COLLISION_H_
#define FORMATION_COLLISION_H_

#include <span>
#include <vector>

#include "formation/formation.h"

namespace formation {

struct AvoidanceConfig {
  double r = 1.0;    // collision radius
  double d_c = 2.0;  // activation distance

  friend bool operator==(const AvoidanceConfig&, const AvoidanceConfig&) = default;
};

void ValidateAvoidanceConfig(const AvoidanceConfig& config);

struct CollisionCone {
  Vec2 apex = Vec2::Zero();
  Vec2 center_dir = Vec2::UnitX();
  double half_angle = 0.0;  // asin(r / d), or pi/2 once d <= r
  double distance = 0.0;
};

// One cone per other agent with 0 < d <= d_c.
std::vector<CollisionCone> BuildCones(const Vec2& position,
                                      std::span<const Vec2> others,
                                      const AvoidanceConfig& config);

struct AvoidanceDecision {
  bool blocked = false;  // u pointed into a cone
  bool stop = false;     // no admissible rotation
  double rotation = 0.0;
};

AvoidanceDecision DecideAvoidance(const Vec2& u,
                                  std::span<const CollisionCone> cones);

// Applies a decision: unchanged, rotated, or zero.
Vec2 ApplyAvoidance(const Vec2& u, const AvoidanceDecision& decision);

Vec2 AdjustControl(const Vec2& u, std::span<const CollisionCone> cones,
                   const AvoidanceConfig& config);

// Smallest angular distance from direction u to the boundary of each cone it
// is outside of; negative when inside some cone.
double AngularMargin(const Vec2& u, std::span<const CollisionCone> cones);

}  // namespace formation

#endif  // FORMATION_COLLISION_H_
