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

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "formation/errors.h"
#include "formation/gain_solver.h"

namespace formation {

std::string VariantName(HigherOrderVariant variant) {
  return variant == HigherOrderVariant::kFullA ? "full_A"
                                               : "identity_derivatives";
}

Vector CharacteristicPolynomial(double mu, const std::vector<double>& k,
                                HigherOrderVariant variant) {
  if (k.empty()) {
    Fail(ErrorCode::kConfiguration, "chain gains k must have m + 1 entries");
  }
  const int m = static_cast<int>(k.size()) - 1;
  Vector c(m + 2);
  c[0] = 1.0;
  // c[p] multiplies lambda^{m+1-p}; gain k_l multiplies lambda^l.
  for (int l = 0; l <= m; ++l) {
    const int p = m + 1 - l;
    if (variant == HigherOrderVariant::kFullA || l == 0) {
      c[p] = -k[l] * mu;
    } else {
      c[p] = k[l];
    }
  }
  return c;
}

Eigen::VectorXcd PolynomialRoots(const Vector& coefficients) {
  if (coefficients.size() == 0 || coefficients[0] == 0.0) {
    Fail(ErrorCode::kConfiguration, "leading polynomial coefficient is zero");
  }
  const Eigen::Index degree = coefficients.size() - 1;
  if (degree == 0) return Eigen::VectorXcd();
  Matrix companion = Matrix::Zero(degree, degree);
  for (Eigen::Index p = 0; p < degree; ++p) {
    companion(0, p) = -coefficients[p + 1] / coefficients[0];
  }
  for (Eigen::Index p = 1; p < degree; ++p) companion(p, p - 1) = 1.0;
  Eigen::EigenSolver<Matrix> eig(companion, false);
  return eig.eigenvalues();
}

HurwitzReport VerifyHigherOrderGains(const std::vector<double>& spectrum,
                                     const std::vector<double>& k,
                                     HigherOrderVariant variant) {
  if (spectrum.empty()) {
    Fail(ErrorCode::kConfiguration, "empty spectrum");
  }
  HurwitzReport report;
  report.worst_real_part = -std::numeric_limits<double>::infinity();
  for (double mu : spectrum) {
    HurwitzEntry entry;
    entry.mu = mu;
    entry.roots = PolynomialRoots(CharacteristicPolynomial(mu, k, variant));
    entry.max_real_part = entry.roots.real().maxCoeff();
    if (entry.max_real_part > report.worst_real_part) {
      report.worst_real_part = entry.max_real_part;
      report.worst_mu = mu;
    }
    report.entries.push_back(std::move(entry));
  }
  report.passed = report.worst_real_part < 0.0;
  return report;
}

Matrix HigherOrderClosedLoop(const Matrix& a, const std::vector<double>& k,
                             HigherOrderVariant variant) {
  if (k.empty()) {
    Fail(ErrorCode::kConfiguration, "chain gains k must have m + 1 entries");
  }
  const Eigen::Index dim = a.rows();
  const int m = static_cast<int>(k.size()) - 1;
  Matrix e = Matrix::Zero(dim * (m + 1), dim * (m + 1));
  for (int l = 0; l < m; ++l) {
    e.block(l * dim, (l + 1) * dim, dim, dim).setIdentity();
  }
  for (int l = 0; l <= m; ++l) {
    auto block = e.block(m * dim, l * dim, dim, dim);
    if (variant == HigherOrderVariant::kFullA || l == 0) {
      block = k[l] * a;
    } else {
      block = -k[l] * Matrix::Identity(dim, dim);
    }
  }
  return e;
}

std::vector<double> NonzeroSpectrum(const SpectrumReport& report) {
  std::vector<double> out;
  for (double lambda : report.eigenvalues) {
    if (std::abs(lambda) > report.zero_tolerance) out.push_back(lambda);
  }
  return out;
}

}  // namespace formation
