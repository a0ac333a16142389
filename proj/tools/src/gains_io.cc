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

#include "formation/gains_io.h"

#include "formation/errors.h"
#include "formation/scenario_io.h"
#include "json_util.h"

namespace formation {
namespace {

using json_util::Boolean;
using json_util::Integer;
using json_util::Number;
using json_util::Numbers;
using json_util::Object;
using json_util::ParseFail;
using json_util::String;
using nlohmann::json;

json ReportJson(const SpectrumReport& r) {
  json eig = json::array();
  for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) eig.push_back(r.eigenvalues[k]);
  return {{"eigenvalues", eig},
          {"zero_count", r.zero_count},
          {"zero_tolerance", r.zero_tolerance},
          {"spectral_gap", r.spectral_gap},
          {"kernel_residual", r.kernel_residual},
          {"passed", r.passed}};
}

SpectrumReport ReportFrom(const json& j, const std::string& path) {
  Object o(j, path);
  SpectrumReport r;
  const auto eig = Numbers(o.Required("eigenvalues"), o.Path("eigenvalues"));
  r.eigenvalues = Eigen::Map<const Vector>(eig.data(), static_cast<Eigen::Index>(eig.size()));
  r.zero_count = static_cast<int>(Integer(o.Required("zero_count"), o.Path("zero_count")));
  r.zero_tolerance = Number(o.Required("zero_tolerance"), o.Path("zero_tolerance"));
  r.spectral_gap = Number(o.Required("spectral_gap"), o.Path("spectral_gap"));
  r.kernel_residual = Number(o.Required("kernel_residual"), o.Path("kernel_residual"));
  r.passed = Boolean(o.Required("passed"), o.Path("passed"));
  o.Finish();
  return r;
}

}  // namespace

std::vector<GainMatrix> GainsDocument::matrices() const {
  std::vector<GainMatrix> out;
  for (const TopologyGains& t : topologies) out.push_back(t.gains);
  return out;
}

json GainsToJson(const GainsDocument& doc) {
  json out;
  out["version"] = kGainsVersion;
  out["n"] = doc.n;
  out["trace_budget"] = doc.trace_budget;
  const SolverInfo& s = doc.solver;
  out["solver"] = {{"algorithm", AlgorithmName(s.algorithm)},
                   {"iterations", s.iterations},
                   {"gamma", s.gamma},
                   {"primal_residual", s.primal_residual},
                   {"dual_residual", s.dual_residual},
                   {"converged", s.converged},
                   {"free_parameters", s.free_parameters},
                   {"tie_groups", s.tie_groups}};
  json topologies = json::array();
  for (const TopologyGains& t : doc.topologies) {
    json edges = json::array();
    for (const EdgeGain& g : t.gains.edge_gains()) {
      edges.push_back({{"i", g.edge.i + 1}, {"j", g.edge.j + 1}, {"a", g.a}, {"b", g.b}});
    }
    topologies.push_back({{"name", t.name}, {"edges", edges}, {"spectrum", ReportJson(t.report)}});
  }
  out["topologies"] = topologies;
  return out;
}

GainsDocument GainsFromJson(const json& j) {
  Object root(j, "$");
  const long long version = Integer(root.Required("version"), "$.version");
  if (version != kGainsVersion) {
    ParseFail("$.version", "unsupported version " + std::to_string(version));
  }
  GainsDocument doc;
  const long long n = Integer(root.Required("n"), "$.n");
  if (n < 3) ParseFail("$.n", "at least 3 agents");
  doc.n = static_cast<int>(n);
  doc.trace_budget = Number(root.Required("trace_budget"), "$.trace_budget");

  Object s(root.Required("solver"), "solver");
  const std::string algorithm = String(s.Required("algorithm"), s.Path("algorithm"));
  if (algorithm == "admm") {
    doc.solver.algorithm = SolverAlgorithm::kAdmm;
  } else if (algorithm == "projected_subgradient") {
    doc.solver.algorithm = SolverAlgorithm::kProjectedSubgradient;
  } else {
    ParseFail(s.Path("algorithm"), "unknown algorithm \"" + algorithm + "\"");
  }
  doc.solver.iterations = static_cast<int>(Integer(s.Required("iterations"), s.Path("iterations")));
  doc.solver.gamma = Number(s.Required("gamma"), s.Path("gamma"));
  doc.solver.primal_residual = Number(s.Required("primal_residual"), s.Path("primal_residual"));
  doc.solver.dual_residual = Number(s.Required("dual_residual"), s.Path("dual_residual"));
  doc.solver.converged = Boolean(s.Required("converged"), s.Path("converged"));
  doc.solver.free_parameters =
      static_cast<int>(Integer(s.Required("free_parameters"), s.Path("free_parameters")));
  doc.solver.tie_groups = static_cast<int>(Integer(s.Required("tie_groups"), s.Path("tie_groups")));
  doc.solver.trace_budget = doc.trace_budget;
  s.Finish();

  const json& list = json_util::Array(root.Required("topologies"), "topologies");
  if (list.empty()) ParseFail("topologies", "at least one topology");
  for (size_t k = 0; k < list.size(); ++k) {
    Object t(list[k], "topologies[" + std::to_string(k) + "]");
    TopologyGains tg;
    tg.name = String(t.Required("name"), t.Path("name"));
    const json& edges = json_util::Array(t.Required("edges"), t.Path("edges"));
    std::vector<EdgeGain> gains;
    for (size_t e = 0; e < edges.size(); ++e) {
      Object g(edges[e], t.Path("edges") + "[" + std::to_string(e) + "]");
      EdgeGain eg;
      const long long i = Integer(g.Required("i"), g.Path("i"));
      const long long jj = Integer(g.Required("j"), g.Path("j"));
      if (i < 1 || i > n || jj < 1 || jj > n) ParseFail(g.path(), "agent index out of range");
      eg.edge = {static_cast<int>(i - 1), static_cast<int>(jj - 1)};
      eg.a = Number(g.Required("a"), g.Path("a"));
      eg.b = Number(g.Required("b"), g.Path("b"));
      g.Finish();
      gains.push_back(eg);
    }
    try {
      tg.gains = GainMatrix(doc.n, gains);
    } catch (const Error& e) {
      ParseFail(t.Path("edges"), e.what());
    }
    if (const json* r = t.Optional("spectrum")) tg.report = ReportFrom(*r, t.Path("spectrum"));
    t.Finish();
    doc.topologies.push_back(std::move(tg));
  }
  root.Finish();
  return doc;
}

GainsDocument LoadGains(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return GainsFromJson(j);
}

void SaveGains(const GainsDocument& doc, const std::string& path) {
  WriteFile(path, GainsToJson(doc).dump(2) + "\n");
}

}  // namespace formation
