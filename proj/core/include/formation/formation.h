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

// Formation geometry: sensing graphs, desired shapes and the four-dimensional
// kernel spanned by translations, rotations and scalings of the shape.

#ifndef FORMATION_FORMATION_H_
#define FORMATION_FORMATION_H_

#include <compare>
#include <vector>

#include <Eigen/Dense>

namespace formation {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Undirected edge between agents i < j (0-based).
struct Edge {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class SensingGraph {
 public:
  SensingGraph() = default;

  // Edges may be given in either orientation; they are stored with i < j and
  // sorted. Self-loops, duplicates and out-of-range indices are rejected.
  SensingGraph(int num_agents, std::vector<Edge> edges);

  static SensingGraph Complete(int num_agents);
  static SensingGraph Cycle(int num_agents);
  static SensingGraph Path(int num_agents);

  int num_agents() const { return num_agents_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Sorted neighbor indices of agent i.
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
  bool HasEdge(int i, int j) const;
  // Position of edge {i, j} in edges(), or -1.
  int EdgeIndex(int i, int j) const;

  friend bool operator==(const SensingGraph& a, const SensingGraph& b) {
    return a.num_agents_ == b.num_agents_ && a.edges_ == b.edges_;
  }

 private:
  int num_agents_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

struct GraphReport {
  bool connected = false;
  int num_components = 0;
  int edge_count = 0;
  int min_degree = 0;
  int max_degree = 0;
  std::vector<int> degrees;
};

// Connectivity and degree statistics. Does not certify universal rigidity.
GraphReport ValidateGraph(const SensingGraph& graph);

// Blockwise (x, y) -> (-y, x).
Vector Rotate90(const Vector& q);

class FormationSpec {
 public:
  FormationSpec() = default;
  // coordinates holds (x_1, y_1, ..., x_n, y_n).
  explicit FormationSpec(Vector coordinates, bool center = true);

  int num_agents() const { return static_cast<int>(q_star_.size() / 2); }
  const Vector& q_star() const { return q_star_; }
  const Vector& q_bar_star() const { return q_bar_star_; }
  // The coordinates as supplied, before centering.
  const Vector& raw() const { return raw_; }
  bool centered() const { return centered_; }
  Vec2 position(int i) const { return q_star_.segment<2>(2 * i); }

  friend bool operator==(const FormationSpec& a, const FormationSpec& b) {
    return a.centered_ == b.centered_ && a.raw_.size() == b.raw_.size() &&
           a.raw_ == b.raw_;
  }

 private:
  Vector raw_;
  Vector q_star_;
  Vector q_bar_star_;
  bool centered_ = true;
};

struct KernelBasis {
  Matrix n;      // [q*, q_bar*, 1, 1_bar]
  Matrix n_hat;  // orthonormal basis of range(n)
  Matrix q;      // orthonormal complement, 2n x (2n - 4)
};

KernelBasis BuildKernelBasis(const FormationSpec& spec);

// I - n_hat n_hat^T.
Matrix ComplementProjector(const KernelBasis& basis);

// ||(I - n_hat n_hat^T) q|| / ||q||.
double SubspaceError(const Vector& q, const KernelBasis& basis);

// V = -1/2 q^T A q.
double LyapunovValue(const Vector& q, const Matrix& a);

double MinPairwiseDistance(const Vector& q);

struct FormationMetrics {
  double subspace_error = 0.0;
  double lyapunov_value = 0.0;
  double min_pairwise_distance = 0.0;
};

}  // namespace formation

#endif  // FORMATION_FORMATION_H_
