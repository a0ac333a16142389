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

// The solver works on the vector x of edge parameters (a_g, b_g), one pair per
// tie group. All linear constraints (A q* = 0, symmetric diagonal blocks, the
// trace) are eliminated up front: x = x0 + F z with F orthonormal. The ADMM
// splitting then only couples z and gamma to the PSD slack Z.

#include "formation/gain_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "formation/errors.h"

namespace formation {
namespace {

class UnionFind {
 public:
  explicit UnionFind(int size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(int x, int y) {
    x = Find(x);
    y = Find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
  }

 private:
  std::vector<int> parent_;
};

struct Problem {
  int n = 0;
  int dim = 0;  // 2n - 4
  std::vector<SensingGraph> graphs;
  KernelBasis basis;
  Vector q_unit;
  Vector q_bar_unit;
  // slot_group[k][e]: tie group of edge e of topology k.
  std::vector<std::vector<int>> slot_group;
  int num_groups = 0;
  double trace_budget = 0.0;  // per topology
  double gamma_floor = 0.0;

  int num_topologies() const { return static_cast<int>(graphs.size()); }
  int num_variables() const { return 2 * num_groups; }
};

// Groups (topology, edge) slots; tied slots share one variable pair.
void AssignGroups(Problem& problem, const std::vector<TieConstraint>& ties) {
  const int k_count = problem.num_topologies();
  std::vector<int> offset(k_count + 1, 0);
  for (int k = 0; k < k_count; ++k) {
    offset[k + 1] =
        offset[k] + static_cast<int>(problem.graphs[k].edges().size());
  }
  UnionFind uf(offset[k_count]);
  for (const TieConstraint& tie : ties) {
    const SensingGraph& gk = problem.graphs[tie.topology_k];
    const SensingGraph& gl = problem.graphs[tie.topology_l];
    for (int j : gk.neighbors(tie.agent)) {
      uf.Union(offset[tie.topology_k] + gk.EdgeIndex(tie.agent, j),
               offset[tie.topology_l] + gl.EdgeIndex(tie.agent, j));
    }
  }
  std::vector<int> root_to_group(offset[k_count], -1);
  problem.num_groups = 0;
  problem.slot_group.assign(k_count, {});
  for (int k = 0; k < k_count; ++k) {
    const int edges = static_cast<int>(problem.graphs[k].edges().size());
    problem.slot_group[k].resize(edges);
    for (int e = 0; e < edges; ++e) {
      const int root = uf.Find(offset[k] + e);
      if (root_to_group[root] < 0) root_to_group[root] = problem.num_groups++;
      problem.slot_group[k][e] = root_to_group[root];
    }
  }
}

// Dense A^k(x).
Matrix Assemble(const Problem& problem, int k, const Vector& x) {
  const int n = problem.n;
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  const auto& edges = problem.graphs[k].edges();
  for (size_t e = 0; e < edges.size(); ++e) {
    const int g = problem.slot_group[k][e];
    const int i = edges[e].i;
    const int j = edges[e].j;
    const Mat2 ij = GainBlock(x[2 * g], x[2 * g + 1]);
    const Mat2 ji = GainBlock(x[2 * g], -x[2 * g + 1]);
    a.block<2, 2>(2 * i, 2 * j) += ij;
    a.block<2, 2>(2 * j, 2 * i) += ji;
    a.block<2, 2>(2 * i, 2 * i) -= ij;
    a.block<2, 2>(2 * j, 2 * j) -= ji;
  }
  return a;
}

double InnerJ(const Mat2& m) { return m(0, 1) - m(1, 0); }

// Adjoint of x -> A^k(x) evaluated at Y, accumulated into h.
void AccumulateAdjoint(const Problem& problem, int k, const Matrix& y,
                       Vector& h) {
  const auto& edges = problem.graphs[k].edges();
  for (size_t e = 0; e < edges.size(); ++e) {
    const int g = problem.slot_group[k][e];
    const int i = edges[e].i;
    const int j = edges[e].j;
    const Mat2 yij = y.block<2, 2>(2 * i, 2 * j);
    const Mat2 yji = y.block<2, 2>(2 * j, 2 * i);
    const Mat2 yii = y.block<2, 2>(2 * i, 2 * i);
    const Mat2 yjj = y.block<2, 2>(2 * j, 2 * j);
    h[2 * g] += yij.trace() + yji.trace() - yii.trace() - yjj.trace();
    h[2 * g + 1] += InnerJ(yij) - InnerJ(yji) - InnerJ(yii) + InnerJ(yjj);
  }
}

// 4x4 elementary patterns of the a and b parameters on rows/cols {i, j}.
Eigen::Matrix4d PatternA() {
  Eigen::Matrix4d p;
  p << -1, 0, 1, 0,
        0, -1, 0, 1,
        1, 0, -1, 0,
        0, 1, 0, -1;
  return p;
}

Eigen::Matrix4d PatternB() {
  Eigen::Matrix4d p;
  p <<  0, -1, 0, 1,
        1,  0, -1, 0,
        0, -1, 0, 1,
        1,  0, -1, 0;
  return p;
}

// Gram matrix of x -> Q^T A^k(x) Q summed over topologies.
Matrix ParameterGram(const Problem& problem) {
  const Matrix projector = ComplementProjector(problem.basis);
  const Eigen::Matrix4d pattern[2] = {PatternA(), PatternB()};
  Matrix gram = Matrix::Zero(problem.num_variables(), problem.num_variables());
  for (int k = 0; k < problem.num_topologies(); ++k) {
    const auto& edges = problem.graphs[k].edges();
    const int count = static_cast<int>(edges.size());
    for (int s = 0; s < count; ++s) {
      const int rows[4] = {2 * edges[s].i, 2 * edges[s].i + 1, 2 * edges[s].j,
                           2 * edges[s].j + 1};
      const int gs = problem.slot_group[k][s];
      for (int t = 0; t < count; ++t) {
        const int cols[4] = {2 * edges[t].i, 2 * edges[t].i + 1,
                             2 * edges[t].j, 2 * edges[t].j + 1};
        const int gt = problem.slot_group[k][t];
        Eigen::Matrix4d m;
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) m(r, c) = projector(rows[r], cols[c]);
        }
        for (int ts = 0; ts < 2; ++ts) {
          for (int tt = 0; tt < 2; ++tt) {
            const double value =
                (pattern[ts].cwiseProduct(m * pattern[tt] * m.transpose()))
                    .sum();
            gram(2 * gs + ts, 2 * gt + tt) += value;
          }
        }
      }
    }
  }
  return gram;
}

// Parametrization of the affine constraint set.
struct AffineSet {
  bool empty = false;
  Vector x0;
  Matrix f;  // orthonormal columns spanning the zero-trace directions
};

AffineSet BuildAffineSet(const Problem& problem) {
  const int n = problem.n;
  const int vars = problem.num_variables();
  const int k_count = problem.num_topologies();
  const int rows_per = 5 * n;
  Matrix c = Matrix::Zero(rows_per * k_count, vars);
  // One trace row per topology: trace(A^k) = budget for every k.
  Matrix trace_rows = Matrix::Zero(k_count, vars);
  for (int k = 0; k < k_count; ++k) {
    const auto& edges = problem.graphs[k].edges();
    const int base = rows_per * k;
    for (size_t e = 0; e < edges.size(); ++e) {
      const int g = problem.slot_group[k][e];
      const int i = edges[e].i;
      const int j = edges[e].j;
      const Vector* targets[2] = {&problem.q_unit, &problem.q_bar_unit};
      for (int v = 0; v < 2; ++v) {
        const Vec2 delta =
            targets[v]->segment<2>(2 * j) - targets[v]->segment<2>(2 * i);
        const Vec2 jdelta(delta.y(), -delta.x());
        const int off = base + 2 * n * v;
        c.block<2, 1>(off + 2 * i, 2 * g) += delta;
        c.block<2, 1>(off + 2 * i, 2 * g + 1) += jdelta;
        c.block<2, 1>(off + 2 * j, 2 * g) -= delta;
        c.block<2, 1>(off + 2 * j, 2 * g + 1) += jdelta;
      }
      // Skew part of the diagonal blocks: sum_j b_ij = 0.
      c(base + 4 * n + i, 2 * g + 1) += 1.0;
      c(base + 4 * n + j, 2 * g + 1) -= 1.0;
      trace_rows(k, 2 * g) -= 4.0;
    }
  }

  AffineSet set;
  Eigen::ColPivHouseholderQR<Matrix> qr(c.transpose());
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  const int nullity = vars - rank;
  if (nullity == 0) {
    set.empty = true;
    return set;
  }
  const Matrix full_q = qr.householderQ();
  const Matrix null_basis = full_q.rightCols(nullity);

  // Trace restricted to the null space; a topology whose trace vanishes
  // there can only carry A = 0.
  const Matrix trace_f = trace_rows * null_basis;  // K x nullity
  for (int k = 0; k < k_count; ++k) {
    if (trace_f.row(k).norm() <= 1e-10 * trace_rows.row(k).norm()) {
      set.empty = true;
      return set;
    }
  }
  const Vector budget = Vector::Constant(k_count, problem.trace_budget);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(trace_f);
  cod.setThreshold(1e-10);
  const Vector y0 = cod.solve(budget);
  if ((trace_f * y0 - budget).norm() > 1e-9 * budget.norm()) {
    set.empty = true;
    return set;
  }
  set.x0 = null_basis * y0;
  const int trace_rank = static_cast<int>(cod.rank());
  if (nullity == trace_rank) {
    set.f = Matrix::Zero(vars, 0);
    return set;
  }
  Eigen::ColPivHouseholderQR<Matrix> tq{Matrix(trace_f.transpose())};
  tq.setThreshold(1e-10);
  const Matrix tq_full = tq.householderQ();
  set.f = null_basis * tq_full.rightCols(nullity - trace_rank);
  return set;
}

struct SolveResult {
  bool structurally_empty = false;
  Vector x;
  SolverInfo info;
};

Matrix PsdProjection(const Matrix& m, double* min_eig = nullptr) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  if (min_eig != nullptr) *min_eig = eig.eigenvalues()[0];
  return eig.eigenvectors() * clipped.asDiagonal() *
         eig.eigenvectors().transpose();
}

// min_k lambda_min(-Q^T A^k Q).
double EvaluateGamma(const Problem& problem, const Vector& x, int* worst_k,
                     Vector* worst_vec) {
  double gamma = std::numeric_limits<double>::infinity();
  for (int k = 0; k < problem.num_topologies(); ++k) {
    const Matrix reduced = ReducedMatrix(Assemble(problem, k, x), problem.basis);
    if (reduced.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(-reduced);
    if (eig.eigenvalues()[0] < gamma) {
      gamma = eig.eigenvalues()[0];
      if (worst_k != nullptr) *worst_k = k;
      if (worst_vec != nullptr) *worst_vec = eig.eigenvectors().col(0);
    }
  }
  return gamma;
}

SolveResult SolveAdmm(const Problem& problem, const AffineSet& set,
                      const SolverOptions& options) {
  SolveResult result;
  result.info.algorithm = SolverAlgorithm::kAdmm;
  const int k_count = problem.num_topologies();
  const int d = problem.dim;
  const Matrix& q = problem.basis.q;
  const int p = static_cast<int>(set.f.cols());
  result.info.free_parameters = p;

  if (p == 0) {
    result.x = set.x0;
    result.info.converged = true;
    result.info.gamma = EvaluateGamma(problem, result.x, nullptr, nullptr);
    return result;
  }

  const Matrix gram_x = ParameterGram(problem);
  const Matrix gram = set.f.transpose() * gram_x * set.f;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    Fail(ErrorCode::kSolverFailure, "parameter Gram matrix is not definite");
  }
  const Matrix solve_map = llt.solve(set.f.transpose());  // p x vars

  std::vector<Matrix> lambda0(k_count);
  Vector h0 = Vector::Zero(problem.num_variables());
  for (int k = 0; k < k_count; ++k) {
    lambda0[k] = ReducedMatrix(Assemble(problem, k, set.x0), problem.basis);
    AccumulateAdjoint(problem, k, q * lambda0[k] * q.transpose(), h0);
  }
  const Vector z_offset = solve_map * h0;

  std::vector<Matrix> z_slack(k_count, Matrix::Zero(d, d));
  std::vector<Matrix> dual(k_count, Matrix::Zero(d, d));
  std::vector<Matrix> m_mat(k_count);
  double rho = options.initial_rho;
  Vector z = Vector::Zero(p);
  Vector x = set.x0;
  const double total_trace = problem.trace_budget * k_count;

  int it = 0;
  int next_adapt = 10;
  double r_norm = 0.0;
  double s_norm = 0.0;
  bool converged = false;
  for (it = 1; it <= options.max_iterations; ++it) {
    Vector h = Vector::Zero(problem.num_variables());
    double trace_w = 0.0;
    for (int k = 0; k < k_count; ++k) {
      const Matrix w = z_slack[k] - dual[k];
      trace_w += w.trace();
      AccumulateAdjoint(problem, k, q * w * q.transpose(), h);
    }
    z = -(z_offset + solve_map * h);
    const double gamma =
        (1.0 / rho - total_trace - trace_w) / (static_cast<double>(k_count) * d);
    x = set.x0 + set.f * z;

    double r_sq = 0.0;
    double s_sq = 0.0;
    double m_sq = 0.0;
    double z_sq = 0.0;
    double u_sq = 0.0;
    for (int k = 0; k < k_count; ++k) {
      const Matrix reduced = ReducedMatrix(Assemble(problem, k, x), problem.basis);
      m_mat[k] = -reduced;
      m_mat[k].diagonal().array() -= gamma;
      const Matrix z_prev = z_slack[k];
      z_slack[k] = PsdProjection(m_mat[k] + dual[k]);
      const Matrix diff = m_mat[k] - z_slack[k];
      dual[k] += diff;
      r_sq += diff.squaredNorm();
      s_sq += (z_slack[k] - z_prev).squaredNorm();
      m_sq += m_mat[k].squaredNorm();
      z_sq += z_slack[k].squaredNorm();
      u_sq += dual[k].squaredNorm();
    }
    r_norm = std::sqrt(r_sq);
    s_norm = rho * std::sqrt(s_sq);
    const double eps_pri =
        options.primal_tolerance *
        (1.0 + std::max(std::sqrt(m_sq), std::sqrt(z_sq)));
    const double eps_dual =
        options.dual_tolerance * (1.0 + rho * std::sqrt(u_sq));
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      converged = true;
      break;
    }
    // Rebalance rho on a geometric schedule so only O(log iterations)
    // changes happen and the fixed-rho convergence argument applies after the
    // last one.
    if (it == next_adapt) {
      next_adapt *= 2;
      const double ratio = (r_norm / eps_pri) / std::max(s_norm / eps_dual, 1e-300);
      if (ratio > 10.0 || ratio < 0.1) {
        const double scale = std::clamp(std::sqrt(ratio), 0.1, 10.0);
        rho *= scale;
        for (Matrix& u : dual) u /= scale;
      }
    }
  }
  result.x = x;
  result.info.iterations = std::min(it, options.max_iterations);
  result.info.converged = converged;
  result.info.primal_residual = r_norm;
  result.info.dual_residual = s_norm;
  result.info.gamma = EvaluateGamma(problem, x, nullptr, nullptr);
  return result;
}

SolveResult SolveSubgradient(const Problem& problem, const AffineSet& set,
                             const SolverOptions& options) {
  SolveResult result;
  result.info.algorithm = SolverAlgorithm::kProjectedSubgradient;
  const int p = static_cast<int>(set.f.cols());
  result.info.free_parameters = p;
  if (p == 0) {
    result.x = set.x0;
    result.info.converged = true;
    result.info.gamma = EvaluateGamma(problem, result.x, nullptr, nullptr);
    return result;
  }
  const Matrix gram = set.f.transpose() * ParameterGram(problem) * set.f;
  Eigen::LLT<Matrix> llt(gram);
  const double step0 = std::abs(problem.trace_budget) / problem.dim;

  Vector z = Vector::Zero(p);
  Vector best_x = set.x0;
  double best_gamma = -std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= options.max_iterations; ++it) {
    const Vector x = set.x0 + set.f * z;
    int worst_k = 0;
    Vector v;
    const double gamma = EvaluateGamma(problem, x, &worst_k, &v);
    if (gamma > best_gamma) {
      best_gamma = gamma;
      best_x = x;
    }
    // d lambda_min(-Lambda) / dz = -F^T adj(Q v v^T Q^T).
    const Vector w = problem.basis.q * v;
    Vector h = Vector::Zero(problem.num_variables());
    AccumulateAdjoint(problem, worst_k, w * w.transpose(), h);
    const Vector grad = -(set.f.transpose() * h);
    const Vector direction = llt.solve(grad);
    const double metric = std::sqrt(std::max(direction.dot(grad), 0.0));
    if (metric == 0.0) break;
    z += (step0 / std::sqrt(static_cast<double>(it))) * direction / metric;
  }
  result.x = best_x;
  result.info.iterations = std::min(it, options.max_iterations);
  result.info.converged = true;
  result.info.gamma = best_gamma;
  return result;
}

Problem MakeProblem(const std::vector<SensingGraph>& graphs,
                    const FormationSpec& spec, const SolverOptions& options) {
  if (graphs.empty()) {
    Fail(ErrorCode::kConfiguration, "no sensing graphs given");
  }
  Problem problem;
  problem.n = spec.num_agents();
  for (const SensingGraph& g : graphs) {
    if (g.num_agents() != problem.n) {
      Fail(ErrorCode::kDimension,
           "graph has " + std::to_string(g.num_agents()) +
               " agents but the formation has " + std::to_string(problem.n));
    }
    ValidateGraph(g);
  }
  problem.graphs = graphs;
  problem.basis = BuildKernelBasis(spec);
  problem.dim = 2 * problem.n - 4;
  problem.q_unit = spec.q_star() / spec.q_star().norm();
  problem.q_bar_unit = spec.q_bar_star() / spec.q_bar_star().norm();
  problem.trace_budget = options.trace_budget.value_or(-problem.dim);
  if (!(problem.trace_budget < 0.0)) {
    Fail(ErrorCode::kConfiguration, "trace budget must be negative");
  }
  if (!(options.primal_tolerance > 0.0) || !(options.dual_tolerance > 0.0) ||
      options.max_iterations <= 0 || !(options.initial_rho > 0.0)) {
    Fail(ErrorCode::kConfiguration,
         "solver tolerances, rho and iteration limit must be positive");
  }
  problem.gamma_floor = options.gamma_floor.value_or(
      1e-6 * std::abs(problem.trace_budget) / problem.dim);
  return problem;
}

std::vector<GainMatrix> ToGainMatrices(const Problem& problem,
                                       const Vector& x) {
  std::vector<GainMatrix> out;
  for (int k = 0; k < problem.num_topologies(); ++k) {
    const auto& edges = problem.graphs[k].edges();
    std::vector<EdgeGain> gains;
    gains.reserve(edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
      const int g = problem.slot_group[k][e];
      gains.push_back({edges[e], x[2 * g], x[2 * g + 1]});
    }
    out.emplace_back(problem.n, std::move(gains));
  }
  return out;
}

// Returns false when the feasible set is empty or gamma <= floor.
bool RunSolver(const Problem& problem, const SolverOptions& options,
               SolveResult* out) {
  const AffineSet set = BuildAffineSet(problem);
  if (set.empty) {
    out->structurally_empty = true;
    out->info.gamma = 0.0;
    return false;
  }
  *out = options.algorithm == SolverAlgorithm::kAdmm
             ? SolveAdmm(problem, set, options)
             : SolveSubgradient(problem, set, options);
  out->info.trace_budget = problem.trace_budget;
  out->info.tie_groups = problem.num_groups;
  return out->info.gamma > problem.gamma_floor;
}

std::string DescribeGraph(const SensingGraph& graph) {
  std::ostringstream os;
  os << graph.num_agents() << " agents, " << graph.edges().size() << " edges";
  return os.str();
}

void CheckConverged(const SolveResult& result) {
  if (!result.info.converged) {
    std::ostringstream os;
    os << "ADMM stopped after " << result.info.iterations
       << " iterations without meeting tolerances (primal residual "
       << result.info.primal_residual << ", dual residual "
       << result.info.dual_residual << ", gamma " << result.info.gamma << ")";
    Fail(ErrorCode::kSolverFailure, os.str());
  }
}

}  // namespace

std::string AlgorithmName(SolverAlgorithm algorithm) {
  return algorithm == SolverAlgorithm::kAdmm ? "admm" : "projected_subgradient";
}

std::vector<TieConstraint> FindTieConstraints(
    const std::vector<SensingGraph>& graphs) {
  std::vector<TieConstraint> ties;
  const int k_count = static_cast<int>(graphs.size());
  if (k_count == 0) return ties;
  const int n = graphs[0].num_agents();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < k_count; ++k) {
      for (int l = k + 1; l < k_count; ++l) {
        if (graphs[k].neighbors(i) == graphs[l].neighbors(i)) {
          ties.push_back({i, k, l});
        }
      }
    }
  }
  return ties;
}

GainMatrix DesignGains(const SensingGraph& graph, const FormationSpec& spec,
                       const SolverOptions& options, SolverInfo* info) {
  Problem problem = MakeProblem({graph}, spec, options);
  AssignGroups(problem, {});
  SolveResult result;
  const bool feasible = RunSolver(problem, options, &result);
  if (info != nullptr) *info = result.info;
  if (!feasible) {
    std::ostringstream os;
    os << "no stabilizing gains for this sensing graph ("
       << DescribeGraph(graph) << "); ";
    if (result.structurally_empty) {
      os << "the linear kernel constraints admit no gain with nonzero trace";
    } else {
      os << "best gamma " << result.info.gamma << " <= floor "
         << problem.gamma_floor;
    }
    os << "; the graph is likely not universally rigid for this formation";
    Fail(ErrorCode::kInfeasibleTopology, os.str());
  }
  CheckConverged(result);
  return ToGainMatrices(problem, result.x).front();
}

std::vector<GainMatrix> DesignJointGains(const std::vector<SensingGraph>& graphs,
                                         const FormationSpec& spec,
                                         const SolverOptions& options,
                                         SolverInfo* info) {
  if (graphs.size() == 1) {
    return {DesignGains(graphs.front(), spec, options, info)};
  }
  Problem problem = MakeProblem(graphs, spec, options);
  for (size_t k = 0; k < graphs.size(); ++k) {
    try {
      DesignGains(graphs[k], spec, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleTopology) throw;
      Fail(ErrorCode::kInfeasibleTopology,
           "topology " + std::to_string(k + 1) + " is infeasible on its own: " +
               e.what());
    }
  }
  const std::vector<TieConstraint> ties =
      options.tie_neighborhoods ? FindTieConstraints(graphs)
                                : std::vector<TieConstraint>{};
  AssignGroups(problem, ties);
  SolveResult result;
  const bool feasible = RunSolver(problem, options, &result);
  if (info != nullptr) *info = result.info;
  if (!feasible) {
    // Release one tie at a time to find the ones that bind.
    constexpr size_t kMaxProbes = 16;
    std::vector<TieConstraint> binding;
    for (size_t t = 0; t < ties.size() && t < kMaxProbes; ++t) {
      std::vector<TieConstraint> rest;
      for (size_t s = 0; s < ties.size(); ++s) {
        if (s != t) rest.push_back(ties[s]);
      }
      Problem probe = problem;
      AssignGroups(probe, rest);
      SolveResult probe_result;
      if (RunSolver(probe, options, &probe_result)) binding.push_back(ties[t]);
    }
    std::ostringstream os;
    os << "topologies are individually feasible but the tied joint problem "
          "is not (gamma "
       << result.info.gamma << " <= floor " << problem.gamma_floor << "); ";
    const auto& list = binding.empty() ? ties : binding;
    os << (binding.empty() ? "ties involved:" : "binding ties:");
    for (const TieConstraint& tie : list) {
      os << " agent " << tie.agent + 1 << " in topologies "
         << tie.topology_k + 1 << "/" << tie.topology_l + 1 << ";";
    }
    Fail(ErrorCode::kJointInfeasibility, os.str());
  }
  CheckConverged(result);
  return ToGainMatrices(problem, result.x);
}

}  // namespace formation
