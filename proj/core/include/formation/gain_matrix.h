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

#ifndef FORMATION_GAIN_MATRIX_H_
#define FORMATION_GAIN_MATRIX_H_

#include <optional>
#include <vector>

#include "formation/formation.h"

namespace formation {

// [[a, b], [-b, a]]: a scaled rotation, so it commutes with every planar
// rotation.
Mat2 GainBlock(double a, double b);

// Gains on the undirected edge (i, j), i < j. Block A_ij = GainBlock(a, b)
// and, by symmetry, A_ji = GainBlock(a, -b).
struct EdgeGain {
  Edge edge;
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const EdgeGain&, const EdgeGain&) = default;
};

struct NeighborGain {
  int j = 0;
  Mat2 block;
};

class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(int num_agents, std::vector<EdgeGain> gains);

  int num_agents() const { return num_agents_; }
  const std::vector<EdgeGain>& edge_gains() const { return gains_; }
  SensingGraph graph() const;

  // A_ij for i != j (zero without an edge); the block-Laplacian diagonal
  // -sum_j A_ij for i == j.
  Mat2 Block(int i, int j) const;
  // Off-diagonal blocks of block-row i, ordered by neighbor index.
  std::vector<NeighborGain> Row(int i) const;
  const Matrix& assembled() const { return assembled_; }

  friend bool operator==(const GainMatrix& x, const GainMatrix& y) {
    return x.num_agents_ == y.num_agents_ && x.gains_ == y.gains_;
  }

 private:
  int num_agents_ = 0;
  std::vector<EdgeGain> gains_;
  Matrix assembled_;
};

struct SpectrumReport {
  Vector eigenvalues;  // ascending
  int zero_count = 0;
  double zero_tolerance = 0.0;
  // -lambda_5 with eigenvalues sorted descending.
  double spectral_gap = 0.0;
  // max over {q*, q_bar*, 1, 1_bar} of ||A v|| / ||v||.
  double kernel_residual = 0.0;
  bool passed = false;
};

// Q^T A Q.
Matrix ReducedMatrix(const GainMatrix& gains, const KernelBasis& basis);
Matrix ReducedMatrix(const Matrix& a, const KernelBasis& basis);

// zero_tolerance defaults to 1e-6 * max |lambda|.
SpectrumReport VerifyGains(const GainMatrix& gains, const KernelBasis& basis,
                           std::optional<double> zero_tolerance = {});
SpectrumReport VerifyGains(const Matrix& a, const KernelBasis& basis,
                           std::optional<double> zero_tolerance = {});

}  // namespace formation

#endif  // FORMATION_GAIN_MATRIX_H_
