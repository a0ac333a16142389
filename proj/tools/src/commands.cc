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

#include "formation/commands.h"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "formation/demos.h"
#include "formation/errors.h"
#include "formation/scenario_io.h"
#include "formation/svg.h"

namespace formation {
namespace {

bool IsInputError(const Error& e) {
  return e.code() == ErrorCode::kParse || e.code() == ErrorCode::kIo;
}

bool IsInfeasible(const Error& e) {
  return e.code() == ErrorCode::kInfeasibleTopology ||
         e.code() == ErrorCode::kJointInfeasibility ||
         e.code() == ErrorCode::kSolverFailure;
}

std::string TopologyName(const Scenario& s, size_t k) {
  return k < s.topology_names.size() ? s.topology_names[k] : "G" + std::to_string(k + 1);
}

void PrintReport(std::ostream& os, const std::string& name, const SpectrumReport& r) {
  os << "topology " << name << ": zero eigenvalues " << r.zero_count
     << " (tolerance " << r.zero_tolerance << "), spectral gap " << r.spectral_gap
     << ", kernel residual " << r.kernel_residual << ", " << (r.passed ? "pass" : "FAIL")
     << "\n  eigenvalues:";
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) os << " " << r.eigenvalues[k];
  os << "\n";
}

void PrintHurwitz(std::ostream& os, const HurwitzReport& h) {
  os << "  chain gains " << (h.passed ? "Hurwitz" : "NOT Hurwitz")
     << " on every nonzero eigenvalue; worst mu " << h.worst_mu
     << ", max real part " << h.worst_real_part << "\n";
}

// Checks that a gains document describes this scenario's topologies.
void MatchTopologies(const Scenario& s, const GainsDocument& doc) {
  if (doc.n != s.formation.num_agents()) {
    Fail(ErrorCode::kDimension, "gains are for " + std::to_string(doc.n) +
                                    " agents, scenario has " +
                                    std::to_string(s.formation.num_agents()));
  }
  if (doc.topologies.size() != s.topologies.size()) {
    Fail(ErrorCode::kConfiguration,
         "gains cover " + std::to_string(doc.topologies.size()) +
             " topologies, scenario has " + std::to_string(s.topologies.size()));
  }
  for (size_t k = 0; k < s.topologies.size(); ++k) {
    if (doc.topologies[k].name != TopologyName(s, k)) {
      Fail(ErrorCode::kConfiguration, "gains topology " + std::to_string(k + 1) +
                                          " is named \"" + doc.topologies[k].name +
                                          "\", scenario expects \"" +
                                          TopologyName(s, k) + "\"");
    }
  }
}

Scenario LoadWithOverrides(const std::string& path, const GlobalOptions& global) {
  Scenario s = LoadScenario(path);
  ApplyOverrides(global, &s);
  try {
    ValidateScenario(s);
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, e.what());
  }
  return s;
}

void WriteCsv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  WriteTrajectoryCsv(log, out);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

// Shared tail of simulate and demo.
int SimulateLoaded(const Scenario& s, const GainsDocument& gains,
                   const std::string& csv_path, const std::optional<std::string>& svg_path,
                   const GlobalOptions& global, Streams io) {
  const std::vector<GainMatrix> matrices = gains.matrices();
  try {
    MatchTopologies(s, gains);
    CheckScenarioGains(s, matrices);
  } catch (const Error& e) {
    io.err << "gains rejected: " << e.what() << "\n";
    return kExitRejected;
  }
  RunOptions options;
  options.verify = false;
  const TrajectoryLog log = Run(s, matrices, options);
  WriteCsv(log, csv_path);
  if (svg_path) {
    const SensingGraph& last = s.topologies[log.topology.back()];
    WriteFile(*svg_path, TrajectorySvg(log, last));
  }
  std::ostringstream summary;
  summary << s.name << ": " << log.times.size() << " steps, final subspace error "
          << log.final_subspace_error << ", min distance " << log.min_distance
          << ", Lyapunov violations " << log.lyapunov_violations << ", seed " << log.seed
          << ", wall " << log.wall_seconds << " s\n";
  if (!log.converged) {
    io.err << "not converged: " << summary.str();
    return kExitNotConverged;
  }
  if (!global.quiet) {
    io.out << "converged at t = " << log.convergence_time << "; " << summary.str();
  }
  return kExitOk;
}

int DesignLoaded(const Scenario& s, const std::string& out_path,
                 const GlobalOptions& global, Streams io, GainsDocument* result) {
  GainsDocument doc;
  try {
    doc = DesignScenario(s);
  } catch (const Error& e) {
    if (!IsInfeasible(e)) throw;
    io.err << e.what() << "\n";
    return kExitRejected;
  }
  bool passed = true;
  for (const TopologyGains& t : doc.topologies) passed = passed && t.report.passed;
  SaveGains(doc, out_path);
  std::ostream& os = passed ? io.out : io.err;
  if (!passed || !global.quiet) {
    os << "designed gains for " << doc.topologies.size() << " topolog"
       << (doc.topologies.size() == 1 ? "y" : "ies") << ": gamma " << doc.solver.gamma
       << ", " << doc.solver.iterations << " iterations (" << AlgorithmName(doc.solver.algorithm)
       << "), trace " << doc.trace_budget << "\n";
    for (const TopologyGains& t : doc.topologies) PrintReport(os, t.name, t.report);
  }
  if (result != nullptr) *result = doc;
  return passed ? kExitOk : kExitRejected;
}

}  // namespace

void ApplyOverrides(const GlobalOptions& global, Scenario* scenario) {
  if (global.seed) scenario->sim.seed = *global.seed;
  if (global.dt) scenario->sim.dt = *global.dt;
  if (global.t_final) scenario->sim.t_final = *global.t_final;
}

GainsDocument DesignScenario(const Scenario& s) {
  SolverInfo info;
  std::vector<GainMatrix> gains;
  try {
    gains = s.topologies.size() == 1
                ? std::vector<GainMatrix>{DesignGains(s.topologies[0], s.formation, s.design,
                                                      &info)}
                : DesignJointGains(s.topologies, s.formation, s.design, &info);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasibleTopology) throw;
    // Name the offending topology; the solver only knows indices.
    for (size_t k = 0; k < s.topologies.size(); ++k) {
      try {
        DesignGains(s.topologies[k], s.formation, s.design);
      } catch (const Error& single) {
        if (single.code() != ErrorCode::kInfeasibleTopology) throw;
        Fail(ErrorCode::kInfeasibleTopology,
             "topology \"" + TopologyName(s, k) + "\": " + single.what());
      }
    }
    throw;
  }
  const KernelBasis basis = BuildKernelBasis(s.formation);
  GainsDocument doc;
  doc.n = s.formation.num_agents();
  doc.trace_budget = info.trace_budget;
  doc.solver = info;
  for (size_t k = 0; k < gains.size(); ++k) {
    TopologyGains t;
    t.name = TopologyName(s, k);
    t.report = VerifyGains(gains[k], basis, s.design.zero_tolerance);
    t.gains = std::move(gains[k]);
    doc.topologies.push_back(std::move(t));
  }
  return doc;
}

int CmdDesign(const std::string& scenario_path, const std::string& out_path,
              const DesignFlags& flags, const GlobalOptions& global, Streams io) {
  try {
    Scenario s = LoadWithOverrides(scenario_path, global);
    if (flags.trace_budget) s.design.trace_budget = flags.trace_budget;
    if (flags.max_iterations) s.design.max_iterations = *flags.max_iterations;
    if (flags.tolerance) {
      s.design.primal_tolerance = *flags.tolerance;
      s.design.dual_tolerance = *flags.tolerance;
    }
    if (flags.algorithm) {
      if (*flags.algorithm == "admm") {
        s.design.algorithm = SolverAlgorithm::kAdmm;
      } else if (*flags.algorithm == "projected_subgradient") {
        s.design.algorithm = SolverAlgorithm::kProjectedSubgradient;
      } else {
        Fail(ErrorCode::kParse, "unknown algorithm \"" + *flags.algorithm + "\"");
      }
    }
    return DesignLoaded(s, out_path, global, io, nullptr);
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    return kExitInput;
  }
}

int CmdSimulate(const std::string& scenario_path, const std::string& gains_path,
                const std::string& csv_path, const std::optional<std::string>& svg_path,
                const GlobalOptions& global, Streams io) {
  try {
    const Scenario s = LoadWithOverrides(scenario_path, global);
    const GainsDocument gains = LoadGains(gains_path);
    return SimulateLoaded(s, gains, csv_path, svg_path, global, io);
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    return kExitInput;
  }
}

int CmdVerify(const std::string& gains_path, const std::string& scenario_path,
              const GlobalOptions& global, Streams io) {
  Scenario s;
  GainsDocument doc;
  try {
    s = LoadWithOverrides(scenario_path, global);
    doc = LoadGains(gains_path);
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    return kExitInput;
  }
  std::ostringstream report;
  bool passed = true;
  try {
    MatchTopologies(s, doc);
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    return kExitRejected;
  }
  const KernelBasis basis = BuildKernelBasis(s.formation);
  for (size_t k = 0; k < doc.topologies.size(); ++k) {
    const GainMatrix& g = doc.topologies[k].gains;
    const SpectrumReport r = VerifyGains(g, basis, s.design.zero_tolerance);
    PrintReport(report, doc.topologies[k].name, r);
    passed = passed && r.passed;
    for (const EdgeGain& e : g.edge_gains()) {
      if (!s.topologies[k].HasEdge(e.edge.i, e.edge.j)) {
        report << "  gain on {" << e.edge.i + 1 << "," << e.edge.j + 1
               << "}, which is not an edge of the topology\n";
        passed = false;
      }
    }
    if (s.agents.dynamics == DynamicsClass::kChain) {
      const HurwitzReport h = VerifyHigherOrderGains(
          NonzeroSpectrum(r), s.controller.k_chain, s.controller.chain_variant);
      PrintHurwitz(report, h);
      passed = passed && h.passed;
    }
  }
  if (!passed) {
    io.err << report.str() << "verification failed\n";
    return kExitRejected;
  }
  if (!global.quiet) io.out << report.str() << "verification passed\n";
  return kExitOk;
}

int CmdDemo(const std::string& name, const std::string& directory,
            const GlobalOptions& global, Streams io) {
  std::optional<Scenario> demo = MakeDemo(name);
  if (!demo) {
    std::string names;
    for (const std::string& n : DemoNames()) names += " " + n;
    io.err << "unknown demo \"" << name << "\"; available:" << names << "\n";
    return kExitInput;
  }
  try {
    ApplyOverrides(global, &*demo);
    ValidateScenario(*demo);
    const std::filesystem::path dir(directory);
    const std::string base = (dir / name).string();
    SaveScenario(*demo, base + ".json");
    GainsDocument gains;
    const int design = DesignLoaded(*demo, base + "_gains.json", global, io, &gains);
    if (design != kExitOk) return design;
    return SimulateLoaded(*demo, gains, base + ".csv", base + ".svg", global, io);
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    return IsInputError(e) ? kExitInput : kExitRejected;
  }
}

}  // namespace formation
