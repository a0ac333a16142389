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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "formation/errors.h"

namespace formation {

SensingGraph::SensingGraph(int num_agents, std::vector<Edge> edges)
    : num_agents_(num_agents) {
  if (num_agents < 0) {
    Fail(ErrorCode::kDimension, "negative agent count");
  }
  for (Edge& e : edges) {
    if (e.i == e.j) {
      Fail(ErrorCode::kConfiguration,
           "self-loop at agent " + std::to_string(e.i + 1));
    }
    if (e.i < 0 || e.j < 0 || e.i >= num_agents || e.j >= num_agents) {
      Fail(ErrorCode::kConfiguration,
           "edge (" + std::to_string(e.i + 1) + ", " + std::to_string(e.j + 1) +
               ") out of range for " + std::to_string(num_agents) + " agents");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    Fail(ErrorCode::kConfiguration,
         "duplicate edge (" + std::to_string(dup->i + 1) + ", " +
             std::to_string(dup->j + 1) + ")");
  }
  edges_ = std::move(edges);
  neighbors_.assign(num_agents, {});
  for (const Edge& e : edges_) {
    neighbors_[e.i].push_back(e.j);
    neighbors_[e.j].push_back(e.i);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
}

SensingGraph SensingGraph::Complete(int num_agents) {
  std::vector<Edge> edges;
  for (int i = 0; i < num_agents; ++i) {
    for (int j = i + 1; j < num_agents; ++j) edges.push_back({i, j});
  }
  return SensingGraph(num_agents, std::move(edges));
}

SensingGraph SensingGraph::Cycle(int num_agents) {
  std::vector<Edge> edges;
  for (int i = 0; i < num_agents; ++i) {
    edges.push_back({i, (i + 1) % num_agents});
  }
  return SensingGraph(num_agents, std::move(edges));
}

SensingGraph SensingGraph::Path(int num_agents) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < num_agents; ++i) edges.push_back({i, i + 1});
  return SensingGraph(num_agents, std::move(edges));
}

bool SensingGraph::HasEdge(int i, int j) const { return EdgeIndex(i, j) >= 0; }

int SensingGraph::EdgeIndex(int i, int j) const {
  if (i > j) std::swap(i, j);
  const Edge key{i, j};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

GraphReport ValidateGraph(const SensingGraph& graph) {
  const int n = graph.num_agents();
  if (n < 3) {
    Fail(ErrorCode::kTooFewAgents,
         "a formation needs at least 3 agents, got " + std::to_string(n));
  }
  GraphReport report;
  report.edge_count = static_cast<int>(graph.edges().size());
  report.degrees.resize(n);
  for (int i = 0; i < n; ++i) {
    report.degrees[i] = static_cast<int>(graph.neighbors(i).size());
  }
  report.min_degree =
      *std::min_element(report.degrees.begin(), report.degrees.end());
  report.max_degree =
      *std::max_element(report.degrees.begin(), report.degrees.end());

  std::vector<int> component(n, -1);
  for (int start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    std::vector<int> stack{start};
    component[start] = report.num_components;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : graph.neighbors(v)) {
        if (component[w] < 0) {
          component[w] = report.num_components;
          stack.push_back(w);
        }
      }
    }
    ++report.num_components;
  }
  report.connected = report.num_components == 1;
  return report;
}

Vector Rotate90(const Vector& q) {
  if (q.size() % 2 != 0) {
    Fail(ErrorCode::kDimension,
         "rotate90 needs an even-length vector, got " +
             std::to_string(q.size()));
  }
  Vector out(q.size());
  for (Eigen::Index k = 0; k < q.size(); k += 2) {
    out[k] = -q[k + 1];
    out[k + 1] = q[k];
  }
  return out;
}

FormationSpec::FormationSpec(Vector coordinates, bool center)
    : raw_(std::move(coordinates)), centered_(center) {
  if (raw_.size() % 2 != 0) {
    Fail(ErrorCode::kDimension, "formation coordinates must come in pairs");
  }
  q_star_ = raw_;
  const Eigen::Index n = raw_.size() / 2;
  if (center && n > 0) {
    Vec2 mean = Vec2::Zero();
    for (Eigen::Index i = 0; i < n; ++i) mean += raw_.segment<2>(2 * i);
    mean /= static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) q_star_.segment<2>(2 * i) -= mean;
  }
  q_bar_star_ = Rotate90(q_star_);
}

KernelBasis BuildKernelBasis(const FormationSpec& spec) {
  const int n = spec.num_agents();
  if (n < 3) {
    Fail(ErrorCode::kTooFewAgents,
         "kernel basis needs at least 3 agents, got " + std::to_string(n));
  }
  KernelBasis basis;
  basis.n.resize(2 * n, 4);
  basis.n.col(0) = spec.q_star();
  basis.n.col(1) = spec.q_bar_star();
  for (int i = 0; i < n; ++i) {
    basis.n(2 * i, 2) = 1.0;
    basis.n(2 * i + 1, 2) = 0.0;
    basis.n(2 * i, 3) = 0.0;
    basis.n(2 * i + 1, 3) = 1.0;
  }
  Eigen::JacobiSVD<Matrix> svd(basis.n, Eigen::ComputeFullU);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() < 4 || sigma[3] <= 1e-8 * sigma[0]) {
    Fail(ErrorCode::kDegenerateFormation,
         "desired coordinates span fewer than four kernel directions "
         "(agents coincide)");
  }
  basis.n_hat = svd.matrixU().leftCols(4);
  basis.q = svd.matrixU().rightCols(2 * n - 4);
  return basis;
}

Matrix ComplementProjector(const KernelBasis& basis) {
  const Eigen::Index dim = basis.n_hat.rows();
  return Matrix::Identity(dim, dim) - basis.n_hat * basis.n_hat.transpose();
}

double SubspaceError(const Vector& q, const KernelBasis& basis) {
  if (q.size() != basis.n_hat.rows()) {
    Fail(ErrorCode::kDimension, "state size does not match kernel basis");
  }
  const double norm = q.norm();
  if (norm == 0.0) {
    Fail(ErrorCode::kUndefined, "subspace error of the zero vector");
  }
  const Vector residual = q - basis.n_hat * (basis.n_hat.transpose() * q);
  return residual.norm() / norm;
}

double LyapunovValue(const Vector& q, const Matrix& a) {
  return -0.5 * q.dot(a * q);
}

double MinPairwiseDistance(const Vector& q) {
  const Eigen::Index n = q.size() / 2;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      best = std::min(best, (q.segment<2>(2 * i) - q.segment<2>(2 * j)).norm());
    }
  }
  return best;
}

}  // namespace formation
