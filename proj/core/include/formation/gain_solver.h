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

// Gain design as an eigenvalue optimization:
//
//   maximize gamma  s.t.  Q^T A Q + gamma I <= 0,  A N = 0,  trace(A) = c,
//
// with A restricted to symmetric block-Laplacians whose off-diagonal blocks
// are scaled rotations supported on the sensing graph.

#ifndef FORMATION_GAIN_SOLVER_H_
#define FORMATION_GAIN_SOLVER_H_

#include <optional>
#include <string>
#include <vector>

#include "formation/formation.h"
#include "formation/gain_matrix.h"

namespace formation {

enum class SolverAlgorithm { kAdmm, kProjectedSubgradient };

struct SolverOptions {
  // trace(A); defaults to -(2n - 4). Must be negative.
  std::optional<double> trace_budget;
  int max_iterations = 20000;
  // Relative ADMM stopping tolerances.
  double primal_tolerance = 1e-7;
  double dual_tolerance = 1e-7;
  // Used for the spectrum report; defaults to 1e-6 * max |lambda|.
  std::optional<double> zero_tolerance;
  // Smallest acceptable gamma; defaults to 1e-6 * |trace_budget| / (2n - 4).
  std::optional<double> gamma_floor;
  SolverAlgorithm algorithm = SolverAlgorithm::kAdmm;
  double initial_rho = 1.0;
  // Joint design only: share gains of agents whose neighbor set is the same
  // in two topologies.
  bool tie_neighborhoods = true;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

struct SolverInfo {
  SolverAlgorithm algorithm = SolverAlgorithm::kAdmm;
  int iterations = 0;
  double gamma = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double trace_budget = 0.0;
  bool converged = false;
  // Free parameters left after the linear constraints are eliminated.
  int free_parameters = 0;
  int tie_groups = 0;
};

std::string AlgorithmName(SolverAlgorithm algorithm);

GainMatrix DesignGains(const SensingGraph& graph, const FormationSpec& spec,
                       const SolverOptions& options = {},
                       SolverInfo* info = nullptr);

// One gain matrix per graph, each with trace trace_budget, maximizing the
// smallest gamma over all graphs.
std::vector<GainMatrix> DesignJointGains(const std::vector<SensingGraph>& graphs,
                                         const FormationSpec& spec,
                                         const SolverOptions& options = {},
                                         SolverInfo* info = nullptr);

// Agent i has the same neighbor set in topologies k and l (k < l).
struct TieConstraint {
  int agent = 0;
  int topology_k = 0;
  int topology_l = 0;

  friend bool operator==(const TieConstraint&, const TieConstraint&) = default;
};

std::vector<TieConstraint> FindTieConstraints(
    const std::vector<SensingGraph>& graphs);

// ---------------------------------------------------------------------------
// Higher-order chains.

enum class HigherOrderVariant {
  // u = k_0 A q + k_1 A q' + ... + k_m A q^(m).
  kFullA,
  // u = k_0 A q - k_1 q' - ... - k_m q^(m); own derivatives act as damping.
  kIdentityDerivatives,
};

std::string VariantName(HigherOrderVariant variant);

// Monic characteristic polynomial for one eigenvalue mu of A, highest degree
// first (m + 2 coefficients).
//   full_A:   l^{m+1} - k_m mu l^m - ... - k_1 mu l - k_0 mu
//   identity: l^{m+1} + k_m l^m + ... + k_1 l - k_0 mu
Vector CharacteristicPolynomial(double mu, const std::vector<double>& k,
                                HigherOrderVariant variant);

// Complex roots of a polynomial given highest degree first.
Eigen::VectorXcd PolynomialRoots(const Vector& coefficients);

struct HurwitzEntry {
  double mu = 0.0;
  double max_real_part = 0.0;
  Eigen::VectorXcd roots;
};

struct HurwitzReport {
  std::vector<HurwitzEntry> entries;
  bool passed = false;
  double worst_mu = 0.0;
  double worst_real_part = 0.0;
};

HurwitzReport VerifyHigherOrderGains(const std::vector<double>& spectrum,
                                     const std::vector<double>& k,
                                     HigherOrderVariant variant);

// Closed-loop matrix of the stacked chain state [q, q', ..., q^(m)].
Matrix HigherOrderClosedLoop(const Matrix& a, const std::vector<double>& k,
                             HigherOrderVariant variant);

// Eigenvalues of A outside the zero tolerance of its spectrum report.
std::vector<double> NonzeroSpectrum(const SpectrumReport& report);

}  // namespace formation

#endif  // FORMATION_GAIN_SOLVER_H_
