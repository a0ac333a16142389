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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "formation/demos.h"
#include "formation/gain_solver.h"
#include "formation/random.h"

namespace formation {
namespace {

// Routh array, highest degree first; true when the first column is strictly
// positive. Returns nullopt when a zero pivot makes the test inconclusive.
std::optional<bool> RouthStable(const std::vector<double>& coeffs) {
  const size_t n = coeffs.size();
  const size_t width = (n + 1) / 2;
  std::vector<std::vector<double>> rows(n, std::vector<double>(width + 1, 0.0));
  for (size_t k = 0; k < n; ++k) rows[k % 2][k / 2] = coeffs[k];
  for (size_t r = 2; r < n; ++r) {
    const double pivot = rows[r - 1][0];
    if (std::abs(pivot) < 1e-12) return std::nullopt;
    for (size_t c = 0; c < width; ++c) {
      rows[r][c] = (pivot * rows[r - 2][c + 1] - rows[r - 2][0] * rows[r - 1][c + 1]) / pivot;
    }
  }
  for (size_t r = 0; r < n; ++r) {
    if (!(rows[r][0] > 0.0)) return false;
  }
  return true;
}

std::vector<double> ToStd(const Vector& v) { return {v.data(), v.data() + v.size()}; }

TEST(RouthOracleTest, KnownPolynomials) {
  EXPECT_EQ(RouthStable({1, 3, 3, 1}), true);     // (s + 1)^3
  EXPECT_EQ(RouthStable({1, -1, 1}), false);
  EXPECT_EQ(RouthStable({1, 1, 1, 10}), false);   // a1 a2 < a3
}

TEST(CharacteristicPolynomialTest, FirstOrder) {
  const Vector p = CharacteristicPolynomial(-1.0, {1.0}, HigherOrderVariant::kFullA);
  ASSERT_EQ(p.size(), 2);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 1.0);
}

TEST(CharacteristicPolynomialTest, UnstableSecondOrder) {
  const Vector p = CharacteristicPolynomial(-1.0, {1.0, -1.0}, HigherOrderVariant::kFullA);
  ASSERT_EQ(p.size(), 3);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], -1.0);
  EXPECT_DOUBLE_EQ(p[2], 1.0);
  const Eigen::VectorXcd roots = PolynomialRoots(p);
  for (Eigen::Index k = 0; k < roots.size(); ++k) EXPECT_NEAR(roots[k].real(), 0.5, 1e-12);
}

TEST(CharacteristicPolynomialTest, DampedVariant) {
  const Vector p = CharacteristicPolynomial(-0.5, {2, 2, 3, 3},
                                            HigherOrderVariant::kIdentityDerivatives);
  EXPECT_EQ(ToStd(p), (std::vector<double>{1, 3, 3, 2, 1}));
}

TEST(VerifyHigherOrderGainsTest, SingleIntegratorCase) {
  const HurwitzReport r = VerifyHigherOrderGains({-1.0}, {1.0}, HigherOrderVariant::kFullA);
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_NEAR(r.entries[0].roots[0].real(), -1.0, 1e-12);
}

TEST(VerifyHigherOrderGainsTest, UnstableReportsMu) {
  const HurwitzReport r =
      VerifyHigherOrderGains({-2.0, -1.0}, {1.0, -1.0}, HigherOrderVariant::kFullA);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.worst_real_part, 0.0);
}

// With k = [2, 2, 3, 3] the reported closed-loop real parts span -0.038 to
// -2.0 for the smallest nonzero |mu| of 0.035.
TEST(VerifyHigherOrderGainsTest, QuadrotorGainsDampedVariant) {
  const std::vector<double> k{2, 2, 3, 3};
  const HurwitzReport r =
      VerifyHigherOrderGains({-0.035, -0.497}, k, HigherOrderVariant::kIdentityDerivatives);
  EXPECT_TRUE(r.passed);
  double lo = 0.0, hi = -1e300;
  for (const HurwitzEntry& e : r.entries) {
    for (Eigen::Index j = 0; j < e.roots.size(); ++j) {
      lo = std::min(lo, e.roots[j].real());
      hi = std::max(hi, e.roots[j].real());
    }
  }
  EXPECT_NEAR(lo, -2.0, 0.05);
  EXPECT_NEAR(hi, -0.038, 0.005);
}

// The same gains in the full-A form are not Hurwitz at these mu: the
// determinant a1 a2 - a3 = 9 mu^2 + 2 mu is negative on (-2/9, 0).
TEST(VerifyHigherOrderGainsTest, QuadrotorGainsFullAFail) {
  const HurwitzReport r =
      VerifyHigherOrderGains({-0.035, -0.497}, {2, 2, 3, 3}, HigherOrderVariant::kFullA);
  EXPECT_FALSE(r.passed);
}

TEST(VerifyHigherOrderGainsTest, AgreesWithRouthOnRandomCases) {
  Rng rng(77);
  int compared = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = static_cast<int>(rng.Uniform(0, 4));
    std::vector<double> k;
    for (int l = 0; l <= m; ++l) k.push_back(rng.Uniform(-1, 4));
    const double mu = -rng.Uniform(0.01, 3);
    const HigherOrderVariant variant = trial % 2 == 0 ? HigherOrderVariant::kFullA
                                                      : HigherOrderVariant::kIdentityDerivatives;
    const HurwitzReport r = VerifyHigherOrderGains({mu}, k, variant);
    if (std::abs(r.worst_real_part) < 1e-6) continue;
    const std::optional<bool> routh = RouthStable(ToStd(CharacteristicPolynomial(mu, k, variant)));
    if (!routh) continue;
    EXPECT_EQ(r.passed, *routh) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 1500);
}

// Closed-loop eigenvalues of the stacked chain equal the union of the
// per-mu polynomial roots plus the kernel modes.
TEST(HigherOrderClosedLoopTest, MatchesPerEigenvalueRoots) {
  const FormationSpec spec = GridFormation();
  SolverOptions o;
  o.trace_budget = -2.0;
  const std::vector<GainMatrix> g = DesignJointGains(SwitchingTopologies(), spec, o);
  const std::vector<double> k{2, 2, 3, 3};
  for (const GainMatrix& gain : g) {
    const Matrix e = HigherOrderClosedLoop(gain.assembled(), k,
                                           HigherOrderVariant::kIdentityDerivatives);
    ASSERT_EQ(e.rows(), 4 * 18);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(e, false).eigenvalues();
    int nonzero = 0;
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      if (std::abs(ev[j]) > 1e-6) {
        EXPECT_LT(ev[j].real(), 0.0);
        ++nonzero;
      }
    }
    // Only the 4 kernel directions keep a zero root.
    EXPECT_EQ(nonzero, 4 * 18 - 4);
    const SpectrumReport r = VerifyGains(gain, BuildKernelBasis(spec));
    EXPECT_TRUE(
        VerifyHigherOrderGains(NonzeroSpectrum(r), k, HigherOrderVariant::kIdentityDerivatives)
            .passed);
  }
}

}  // namespace
}  // namespace formation
