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

// Reference computations written without the library's own linear algebra
// helpers, so tests compare two independent constructions.

#ifndef FORMATION_TESTS_ORACLES_H_
#define FORMATION_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "formation/formation.h"
#include "formation/random.h"

namespace formation::testing {

// Columns q - mean, rot90(q - mean), 1 (x) e1, 1 (x) e2, orthonormalized
// by modified Gram-Schmidt.
inline Matrix OracleKernelBasis(const Vector& coordinates) {
  const int n = static_cast<int>(coordinates.size() / 2);
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += coordinates[2 * i];
    my += coordinates[2 * i + 1];
  }
  mx /= n;
  my /= n;
  Matrix cols = Matrix::Zero(2 * n, 4);
  for (int i = 0; i < n; ++i) {
    const double x = coordinates[2 * i] - mx, y = coordinates[2 * i + 1] - my;
    cols(2 * i, 0) = x;
    cols(2 * i + 1, 0) = y;
    cols(2 * i, 1) = -y;
    cols(2 * i + 1, 1) = x;
    cols(2 * i, 2) = 1.0;
    cols(2 * i + 1, 3) = 1.0;
  }
  for (int c = 0; c < 4; ++c) {
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (int r = 0; r < 2 * n; ++r) dot += cols(r, p) * cols(r, c);
      for (int r = 0; r < 2 * n; ++r) cols(r, c) -= dot * cols(r, p);
    }
    double norm = 0.0;
    for (int r = 0; r < 2 * n; ++r) norm += cols(r, c) * cols(r, c);
    norm = std::sqrt(norm);
    for (int r = 0; r < 2 * n; ++r) cols(r, c) /= norm;
  }
  return cols;
}

// Optimal complete-graph gains: -(I - N N^T), rescaled to the given trace.
inline Matrix OracleProjectorGains(const Vector& coordinates, double trace) {
  const Matrix basis = OracleKernelBasis(coordinates);
  const Eigen::Index dim = coordinates.size();
  Matrix p = -(Matrix::Identity(dim, dim) - basis * basis.transpose());
  return p * (trace / p.trace());
}

inline Vector RandomCoordinates(int n, std::uint64_t seed, double half_width) {
  Rng rng(seed);
  Vector c(2 * n);
  for (int i = 0; i < 2 * n; ++i) c[i] = rng.Uniform(-half_width, half_width);
  return c;
}

// Grows a rigid graph one agent at a time: the first three agents form a
// triangle and every later agent links to its k nearest predecessors.
inline SensingGraph TrilaterationGraph(const Vector& coordinates, int k) {
  const int n = static_cast<int>(coordinates.size() / 2);
  std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}};
  for (int i = 3; i < n; ++i) {
    std::vector<std::pair<double, int>> by_distance;
    for (int j = 0; j < i; ++j) {
      const double dx = coordinates[2 * i] - coordinates[2 * j];
      const double dy = coordinates[2 * i + 1] - coordinates[2 * j + 1];
      by_distance.push_back({std::hypot(dx, dy), j});
    }
    std::sort(by_distance.begin(), by_distance.end());
    for (int t = 0; t < std::min(k, i); ++t) edges.push_back({by_distance[t].second, i});
  }
  return SensingGraph(n, edges);
}

inline double SpectralDistance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace formation::testing

#endif  // FORMATION_TESTS_ORACLES_H_
