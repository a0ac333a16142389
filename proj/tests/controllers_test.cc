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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "formation/demos.h"
#include "formation/errors.h"

namespace formation {
namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode CodeOf(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kUndefined;
}

std::vector<NeighborGain> TwoNeighbors() {
  return {{1, GainBlock(2, -1)}, {2, GainBlock(-1, 3)}};
}

TEST(SingleIntegratorControlTest, WorkedExample) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2(2, 3)}, {2, Vec2(3, 1)}};
  EXPECT_EQ(SingleIntegratorControl(rel, TwoNeighbors()), Vec2(1, -2));
}

TEST(SingleIntegratorControlTest, ZeroOffsets) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2::Zero()}, {2, Vec2::Zero()}};
  EXPECT_EQ(SingleIntegratorControl(rel, TwoNeighbors()), Vec2::Zero());
}

TEST(SingleIntegratorControlTest, MissingGainIsConfigurationError) {
  const std::vector<RelativeMeasurement> rel{{4, Vec2(1, 0)}};
  EXPECT_EQ(CodeOf([&] { SingleIntegratorControl(rel, TwoNeighbors()); }),
            ErrorCode::kConfiguration);
}

TEST(SingleIntegratorControlTest, ZeroAtDesignedFormation) {
  const FormationSpec spec = HexagonFormation();
  const GainMatrix g = DesignGains(SensingGraph::Complete(6), spec, SolverOptions{});
  for (int i = 0; i < 6; ++i) {
    std::vector<RelativeMeasurement> rel;
    for (const NeighborGain& ng : g.Row(i)) {
      rel.push_back({ng.j, spec.position(ng.j) - spec.position(i)});
    }
    EXPECT_LT(SingleIntegratorControl(rel, g.Row(i)).norm(), 1e-9);
  }
}

TEST(SingleIntegratorControlTest, RotatedFrameRotatesOutput) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2(2, 3)}, {2, Vec2(3, 1)}};
  const Mat2 r = Rotation(0.7);
  const std::vector<RelativeMeasurement> local{{1, r * rel[0].offset}, {2, r * rel[1].offset}};
  const Vec2 global = SingleIntegratorControl(rel, TwoNeighbors());
  EXPECT_LT((SingleIntegratorControl(local, TwoNeighbors()) - r * global).norm(), 1e-12);
}

TEST(PerturbControlTest, Examples) {
  EXPECT_EQ(PerturbControl(Vec2(1, -2), 1, 0), Vec2(1, -2));
  EXPECT_EQ(PerturbControl(Vec2(1, -2), 2, 0), Vec2(2, -4));
  const Vec2 p = PerturbControl(Vec2(1, 0), 1, kPi / 4);
  EXPECT_NEAR(p.x(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(p.y(), std::sqrt(0.5), 1e-15);
}

TEST(PerturbControlTest, OutsideHypothesisIsRejected) {
  EXPECT_EQ(CodeOf([] { PerturbControl(Vec2(1, 0), 1, kPi / 2); }),
            ErrorCode::kGuaranteeViolation);
  EXPECT_EQ(CodeOf([] { PerturbControl(Vec2(1, 0), 0, 0); }),
            ErrorCode::kGuaranteeViolation);
}

TEST(SaturateNormTest, Examples) {
  EXPECT_EQ(SaturateNorm(Vec2(3, 4), 2.5), Vec2(1.5, 2.0));
  EXPECT_EQ(SaturateNorm(Vec2(0.3, 0.4), 2.5), Vec2(0.3, 0.4));
  EXPECT_EQ(SaturateNorm(Vec2::Zero(), 1), Vec2::Zero());
}

TEST(SaturateNormTest, IdempotentAndBounded) {
  const Vec2 once = SaturateNorm(Vec2(0.1, 7.3), 0.3);
  EXPECT_LE(once.norm(), 0.3);
  EXPECT_EQ(SaturateNorm(once, 0.3), once);
}

TEST(IntegralControlTest, NoIntegralGainReducesToScaledConsensus) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2(2, 3)}, {2, Vec2(3, 1)}};
  IntegralState state;
  for (int step = 0; step < 3; ++step) {
    const IntegralControlResult r = IntegralControl(rel, TwoNeighbors(), state, 0.1, 2.5, 0.0);
    EXPECT_EQ(r.u, Vec2(2.5, -5.0));
    state = r.state;
  }
}

TEST(IntegralControlTest, ZeroErrorKeepsAccumulatorZero) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2::Zero()}};
  IntegralState state;
  for (int step = 0; step < 5; ++step) {
    state = IntegralControl(rel, TwoNeighbors(), state, 0.1, 1, 1).state;
  }
  EXPECT_EQ(state.accumulator, Vec2::Zero());
}

TEST(IntegralControlTest, RejectsNonPositiveGain) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2::Zero()}};
  EXPECT_EQ(CodeOf([&] { IntegralControl(rel, TwoNeighbors(), {}, 0.1, 0, 1); }),
            ErrorCode::kGuaranteeViolation);
}

// Two agents under different constant disturbances: proportional consensus
// leaves an offset of |d2 - d1| / 2, the integral term removes it.
TEST(IntegralControlTest, RejectsConstantDisturbance) {
  const std::vector<NeighborGain> g0{{1, GainBlock(1, 0)}};
  const std::vector<NeighborGain> g1{{0, GainBlock(1, 0)}};
  const Vec2 d0(0.4, -0.2), d1(-0.3, 0.5);
  Vec2 q0(0, 0), q1(3, 1);
  IntegralState s0, s1;
  const double dt = 0.001;
  for (int step = 0; step < 50000; ++step) {
    const std::vector<RelativeMeasurement> r0{{1, q1 - q0}};
    const std::vector<RelativeMeasurement> r1{{0, q0 - q1}};
    const IntegralControlResult c0 = IntegralControl(r0, g0, s0, dt, 1, 1);
    const IntegralControlResult c1 = IntegralControl(r1, g1, s1, dt, 1, 1);
    s0 = c0.state;
    s1 = c1.state;
    q0 += dt * (c0.u + d0);
    q1 += dt * (c1.u + d1);
  }
  EXPECT_LT((q1 - q0).norm(), 1e-3);
}

TEST(HigherOrderControlTest, FirstOrderMatchesSingleIntegrator) {
  const std::vector<ChainMeasurement> rel{{1, {Vec2(2, 3)}}, {2, {Vec2(3, 1)}}};
  const std::vector<double> k{1};
  for (HigherOrderVariant v : {HigherOrderVariant::kFullA, HigherOrderVariant::kIdentityDerivatives}) {
    EXPECT_EQ(HigherOrderControl(rel, {}, TwoNeighbors(), k, v), Vec2(1, -2));
  }
}

TEST(HigherOrderControlTest, FullAWithoutNeighborDerivatives) {
  const std::vector<ChainMeasurement> rel{{1, {Vec2(2, 3)}}};
  const std::vector<Vec2> own{Vec2::Zero()};
  const std::vector<double> k{1, 1};
  EXPECT_EQ(CodeOf([&] {
              HigherOrderControl(rel, own, TwoNeighbors(), k, HigherOrderVariant::kFullA);
            }),
            ErrorCode::kMeasurementAvailability);
}

// Chain at rest away from the formation: only the position term acts, so the
// command is k0 times the matching block of A q.
TEST(HigherOrderControlTest, AtRestEqualsScaledConsensus) {
  const FormationSpec spec = TriangleFormation();
  const SensingGraph graph = TriangleGraph();
  const GainMatrix g = DesignGains(graph, spec, SolverOptions{});
  const int n = spec.num_agents();
  Vector q(2 * n);
  for (int i = 0; i < n; ++i) q.segment<2>(2 * i) = Vec2(0.3 * i * i - 1, std::sin(i));
  const Vector aq = g.assembled() * q;
  const std::vector<double> k{2, 2, 3, 3};
  const std::vector<Vec2> own(3, Vec2::Zero());
  for (int i = 0; i < n; ++i) {
    std::vector<ChainMeasurement> rel;
    for (const NeighborGain& ng : g.Row(i)) {
      const Vec2 d = q.segment<2>(2 * ng.j) - q.segment<2>(2 * i);
      rel.push_back({ng.j, {d, Vec2::Zero(), Vec2::Zero(), Vec2::Zero()}});
    }
    for (HigherOrderVariant v : {HigherOrderVariant::kFullA, HigherOrderVariant::kIdentityDerivatives}) {
      const Vec2 u = HigherOrderControl(rel, own, g.Row(i), k, v);
      EXPECT_LT((u - 2.0 * Vec2(aq.segment<2>(2 * i))).norm(), 1e-12);
    }
  }
}

TEST(UnicycleControlTest, Examples) {
  VelocityCommand c = UnicycleControl(Vec2(1, 0), Vec2(2, 3));
  EXPECT_EQ(c.v, 2);
  EXPECT_EQ(c.omega, 3);
  c = UnicycleControl(Vec2(0, 1), Vec2(2, 3));
  EXPECT_EQ(c.v, 3);
  EXPECT_EQ(c.omega, -2);
  c = UnicycleControl(Vec2(0, 1), Vec2::Zero());
  EXPECT_EQ(c.v, 0);
  EXPECT_EQ(c.omega, 0);
}

TEST(UnicycleControlTest, NonUnitHeading) {
  EXPECT_EQ(CodeOf([] { UnicycleControl(Vec2(2, 0), Vec2(1, 1)); }), ErrorCode::kNormalization);
}

TEST(UnicycleActuatorControlTest, Examples) {
  ActuatorCommand a =
      UnicycleActuatorControl(Vec2(1, 0), Vec2(1, -2), 0, ActuatorMode::kDirect, std::nullopt);
  EXPECT_EQ(a.s, 1);
  EXPECT_EQ(a.r, -2);
  a = UnicycleActuatorControl(Vec2(1, 0), Vec2(1, -2), 1, ActuatorMode::kVelocityFeedback, 2.0);
  EXPECT_EQ(a.s, 0);
  a = UnicycleActuatorControl(Vec2(1, 0), Vec2(1, 5), 3, ActuatorMode::kVelocityFeedback, 2.0);
  EXPECT_EQ(a.s, -4);
  EXPECT_EQ(a.r, 5);
}

TEST(UnicycleActuatorControlTest, FeedbackNeedsGain) {
  EXPECT_EQ(CodeOf([] {
              UnicycleActuatorControl(Vec2(1, 0), Vec2(1, 0), 0, ActuatorMode::kVelocityFeedback,
                                      std::nullopt);
            }),
            ErrorCode::kConfiguration);
}

TEST(CarControlTest, Examples) {
  VelocityCommand c = CarControl(Vec2(1, 0), Vec2(2, 3), DriveType::kFront, 0.3);
  EXPECT_EQ(c.v, 2);
  EXPECT_EQ(c.omega, 3);
  c = CarControl(Vec2(1, 0), Vec2(2, 3), DriveType::kRear, kPi / 2);
  EXPECT_NEAR(c.v, 0, 1e-15);
  c = CarControl(Vec2(1, 0), Vec2(4, 3), DriveType::kRear, kPi / 3);
  EXPECT_NEAR(c.v, 2, 1e-15);
}

TEST(CarActuatorControlTest, Examples) {
  ActuatorCommand a =
      CarActuatorControl(Vec2(0, 1), Vec2(2, 3), 0, ActuatorMode::kDirect, std::nullopt);
  EXPECT_EQ(a.s, 3);
  EXPECT_EQ(a.r, -2);
  a = CarActuatorControl(Vec2(0, 1), Vec2(2, 3), 3, ActuatorMode::kVelocityFeedback, 1.0);
  EXPECT_EQ(a.s, 0);
  a = CarActuatorControl(Vec2(1, 0), Vec2(5, 0), 0, ActuatorMode::kVelocityFeedback, 1.0);
  EXPECT_EQ(a.s, 5);
}

TEST(ScaleAugmentedControlTest, AtDesiredDistancesAddsNothing) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2(2, 3)}, {2, Vec2(3, 1)}};
  const std::vector<DesiredDistance> d{{1, std::hypot(2, 3)}, {2, std::hypot(3, 1)}};
  const Vec2 u = ScaleAugmentedControl(rel, TwoNeighbors(), d, ScaleFunction::kTanh, 1);
  EXPECT_LT((u - Vec2(1, -2)).norm(), 1e-15);
}

TEST(ScaleAugmentedControlTest, StretchedEdgeAttracts) {
  const std::vector<NeighborGain> zero{{1, GainBlock(0, 0)}};
  const std::vector<RelativeMeasurement> rel{{1, Vec2(3, 0)}};
  const std::vector<DesiredDistance> d{{1, 1.0}};
  const Vec2 u = ScaleAugmentedControl(rel, zero, d, ScaleFunction::kTanh, 1);
  EXPECT_NEAR(u.x(), std::tanh(2.0) * 3, 1e-15);
  EXPECT_EQ(u.y(), 0);
}

TEST(ScaleAugmentedControlTest, MissingDistance) {
  const std::vector<RelativeMeasurement> rel{{1, Vec2(3, 0)}};
  EXPECT_EQ(CodeOf([&] {
              ScaleAugmentedControl(rel, TwoNeighbors(), {}, ScaleFunction::kAtan, 1);
            }),
            ErrorCode::kConfiguration);
}

}  // namespace
}  // namespace formation
