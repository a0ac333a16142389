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

#include "formation/gain_matrix.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "formation/errors.h"

namespace formation {

Mat2 GainBlock(double a, double b) {
  Mat2 block;
  block << a, b, -b, a;
  return block;
}

GainMatrix::GainMatrix(int num_agents, std::vector<EdgeGain> gains)
    : num_agents_(num_agents) {
  std::vector<Edge> edges;
  edges.reserve(gains.size());
  for (EdgeGain& g : gains) {
    if (g.edge.i > g.edge.j) {
      std::swap(g.edge.i, g.edge.j);
      g.b = -g.b;
    }
    edges.push_back(g.edge);
  }
  // Validates indices and duplicates.
  SensingGraph check(num_agents, edges);
  std::sort(gains.begin(), gains.end(),
            [](const EdgeGain& x, const EdgeGain& y) { return x.edge < y.edge; });
  gains_ = std::move(gains);

  assembled_ = Matrix::Zero(2 * num_agents, 2 * num_agents);
  for (const EdgeGain& g : gains_) {
    const int i = g.edge.i;
    const int j = g.edge.j;
    const Mat2 ij = GainBlock(g.a, g.b);
    const Mat2 ji = GainBlock(g.a, -g.b);
    assembled_.block<2, 2>(2 * i, 2 * j) = ij;
    assembled_.block<2, 2>(2 * j, 2 * i) = ji;
    assembled_.block<2, 2>(2 * i, 2 * i) -= ij;
    assembled_.block<2, 2>(2 * j, 2 * j) -= ji;
  }
}

SensingGraph GainMatrix::graph() const {
  std::vector<Edge> edges;
  edges.reserve(gains_.size());
  for (const EdgeGain& g : gains_) edges.push_back(g.edge);
  return SensingGraph(num_agents_, std::move(edges));
}

Mat2 GainMatrix::Block(int i, int j) const {
  if (i < 0 || j < 0 || i >= num_agents_ || j >= num_agents_) {
    Fail(ErrorCode::kDimension, "block index out of range");
  }
  return assembled_.block<2, 2>(2 * i, 2 * j);
}

std::vector<NeighborGain> GainMatrix::Row(int i) const {
  std::vector<NeighborGain> row;
  for (const EdgeGain& g : gains_) {
    if (g.edge.i == i) row.push_back({g.edge.j, GainBlock(g.a, g.b)});
    if (g.edge.j == i) row.push_back({g.edge.i, GainBlock(g.a, -g.b)});
  }
  std::sort(row.begin(), row.end(),
            [](const NeighborGain& x, const NeighborGain& y) { return x.j < y.j; });
  return row;
}

Matrix ReducedMatrix(const Matrix& a, const KernelBasis& basis) {
  if (a.rows() != basis.q.rows() || a.cols() != basis.q.rows()) {
    Fail(ErrorCode::kDimension,
         "gain matrix is " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " but the kernel basis expects " +
             std::to_string(basis.q.rows()));
  }
  Matrix reduced = basis.q.transpose() * a * basis.q;
  return 0.5 * (reduced + reduced.transpose());
}

Matrix ReducedMatrix(const GainMatrix& gains, const KernelBasis& basis) {
  return ReducedMatrix(gains.assembled(), basis);
}

SpectrumReport VerifyGains(const Matrix& a, const KernelBasis& basis,
                           std::optional<double> zero_tolerance) {
  if (a.rows() != basis.n.rows() || a.cols() != basis.n.rows()) {
    Fail(ErrorCode::kDimension, "gain matrix does not match kernel basis");
  }
  SpectrumReport report;
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  report.eigenvalues = eig.eigenvalues();
  const double max_abs = report.eigenvalues.cwiseAbs().maxCoeff();
  report.zero_tolerance = zero_tolerance.value_or(1e-6 * max_abs);

  bool others_negative = true;
  for (double lambda : report.eigenvalues) {
    if (std::abs(lambda) <= report.zero_tolerance) {
      ++report.zero_count;
    } else if (lambda >= -report.zero_tolerance) {
      others_negative = false;
    }
  }
  const Eigen::Index dim = report.eigenvalues.size();
  if (dim > 4) report.spectral_gap = -report.eigenvalues[dim - 5];

  for (int c = 0; c < 4; ++c) {
    const double norm = basis.n.col(c).norm();
    if (norm == 0.0) continue;
    report.kernel_residual =
        std::max(report.kernel_residual, (a * basis.n.col(c)).norm() / norm);
  }
  report.passed = report.zero_count == 4 && others_negative &&
                  report.kernel_residual <= report.zero_tolerance;
  return report;
}

SpectrumReport VerifyGains(const GainMatrix& gains, const KernelBasis& basis,
                           std::optional<double> zero_tolerance) {
  return VerifyGains(gains.assembled(), basis, zero_tolerance);
}

}  // namespace formation
