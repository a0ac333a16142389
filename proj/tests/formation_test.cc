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

#include "formation/formation.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "formation/controllers.h"
#include "formation/demos.h"
#include "formation/errors.h"
#include "support/oracles.h"

namespace formation {
namespace {

Vector Vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

TEST(SensingGraphTest, NormalizesEdges) {
  const SensingGraph g(3, {{2, 0}, {1, 2}});
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_TRUE(g.HasEdge(0, 2));
  EXPECT_TRUE(g.HasEdge(2, 0));
  EXPECT_FALSE(g.HasEdge(0, 1));
  EXPECT_EQ(g.neighbors(2).size(), 2u);
}

TEST(SensingGraphTest, RejectsSelfLoopsAndDuplicates) {
  EXPECT_THROW(SensingGraph(3, {{1, 1}}), Error);
  EXPECT_THROW(SensingGraph(3, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(SensingGraph(3, {{0, 3}}), Error);
}

TEST(SensingGraphTest, Generators) {
  EXPECT_EQ(SensingGraph::Complete(6).edges().size(), 15u);
  EXPECT_EQ(SensingGraph::Cycle(6).edges().size(), 6u);
  EXPECT_EQ(SensingGraph::Path(6).edges().size(), 5u);
}

TEST(ValidateGraphTest, CompleteGraph) {
  const GraphReport r = ValidateGraph(SensingGraph::Complete(6));
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.min_degree, 5);
}

TEST(ValidateGraphTest, Cycle) {
  const GraphReport r = ValidateGraph(SensingGraph::Cycle(6));
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.min_degree, 2);
  EXPECT_EQ(r.max_degree, 2);
}

TEST(ValidateGraphTest, TwoTriangles) {
  const GraphReport r =
      ValidateGraph(SensingGraph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}));
  EXPECT_FALSE(r.connected);
  EXPECT_EQ(r.num_components, 2);
}

TEST(Rotate90Test, Examples) {
  EXPECT_EQ(Rotate90(Vec({1, 0})), Vec({0, 1}));
  EXPECT_EQ(Rotate90(Vec({0, 0, 2, 3})), Vec({0, 0, -3, 2}));
  const Vector q = Vec({1, 2, 3, 4});
  EXPECT_EQ(Rotate90(Rotate90(q)), -q);
}

TEST(FormationSpecTest, CentersAndRotates) {
  const FormationSpec spec(Vec({1, 1, 3, 1, 2, 4}));
  const Vector& q = spec.q_star();
  EXPECT_NEAR(q[0] + q[2] + q[4], 0.0, 1e-14);
  EXPECT_NEAR(q[1] + q[3] + q[5], 0.0, 1e-14);
  EXPECT_NEAR(q.dot(spec.q_bar_star()), 0.0, 1e-14);
  EXPECT_EQ(spec.q_bar_star(), Rotate90(q));
}

TEST(FormationSpecTest, KeepsRawWhenNotCentered) {
  const Vector raw = Vec({1, 1, 3, 1, 2, 4});
  const FormationSpec spec(raw, false);
  EXPECT_EQ(spec.q_star(), raw);
}

TEST(KernelBasisTest, EquilateralTriangle) {
  const double h = std::sqrt(3.0) / 2;
  const KernelBasis b = BuildKernelBasis(FormationSpec(Vec({1, 0, -0.5, h, -0.5, -h})));
  EXPECT_EQ(b.q.rows(), 6);
  EXPECT_EQ(b.q.cols(), 2);
  EXPECT_LT((b.q.transpose() * b.n_hat).norm(), 1e-10);
}

TEST(KernelBasisTest, CoincidentAgentsAreDegenerate) {
  try {
    BuildKernelBasis(FormationSpec(Vec({1, 0, 1, 0, 1, 0})));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateFormation);
  }
}

TEST(KernelBasisTest, HexagonMatchesGramSchmidtOracle) {
  const FormationSpec spec = HexagonFormation();
  const KernelBasis b = BuildKernelBasis(spec);
  ASSERT_EQ(b.q.rows(), 12);
  ASSERT_EQ(b.q.cols(), 8);
  EXPECT_LT((b.q.transpose() * b.q - Matrix::Identity(8, 8)).norm(), 1e-10);
  EXPECT_LT((b.n_hat.transpose() * b.n_hat - Matrix::Identity(4, 4)).norm(), 1e-10);
  const Matrix oracle = testing::OracleKernelBasis(spec.raw());
  // Same subspace: projectors agree.
  EXPECT_LT((b.n_hat * b.n_hat.transpose() - oracle * oracle.transpose()).norm(), 1e-10);
  EXPECT_LT((b.q.transpose() * oracle).norm(), 1e-10);
}

TEST(KernelBasisTest, RandomFormationsProjectorsAgree) {
  for (int n = 3; n <= 12; ++n) {
    const Vector c = testing::RandomCoordinates(n, 500 + n, 3.0);
    const KernelBasis b = BuildKernelBasis(FormationSpec(c));
    const Matrix oracle = testing::OracleKernelBasis(c);
    EXPECT_LT((b.n_hat * b.n_hat.transpose() - oracle * oracle.transpose()).norm(), 1e-10)
        << "n = " << n;
    const Matrix p = ComplementProjector(b);
    EXPECT_LT((p * p - p).norm(), 1e-12);
  }
}

TEST(SubspaceErrorTest, ZeroOnFormationAndSimilarities) {
  const FormationSpec spec = HexagonFormation();
  const KernelBasis b = BuildKernelBasis(spec);
  EXPECT_NEAR(SubspaceError(spec.q_star(), b), 0.0, 1e-10);
  const Mat2 r = Rotation(37.0 * std::numbers::pi / 180);
  Vector q(12);
  for (int i = 0; i < 6; ++i) q.segment<2>(2 * i) = 2.5 * r * spec.position(i) + Vec2(4, -1);
  EXPECT_NEAR(SubspaceError(q, b), 0.0, 1e-10);
}

TEST(SubspaceErrorTest, MatchesDirectProjection) {
  const FormationSpec spec = HexagonFormation();
  const KernelBasis b = BuildKernelBasis(spec);
  const Vector unit_star = spec.q_star() / spec.q_star().norm();
  const Vector w = b.q.col(3);
  const double eps = 0.1;
  const Vector q = unit_star + eps * w;
  EXPECT_NEAR(SubspaceError(q, b), eps / q.norm(), 1e-12);
}

TEST(SubspaceErrorTest, ZeroVectorIsUndefined) {
  const KernelBasis b = BuildKernelBasis(HexagonFormation());
  EXPECT_THROW(SubspaceError(Vector::Zero(12), b), Error);
}

TEST(MinPairwiseDistanceTest, Simple) {
  EXPECT_DOUBLE_EQ(MinPairwiseDistance(Vec({0, 0, 3, 4, 10, 0})), 5.0);
}

}  // namespace
}  // namespace formation
