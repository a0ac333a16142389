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

#include "formation/scenario_io.h"

#include <fstream>
#include <map>
#include <sstream>

#include "formation/errors.h"
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

template <typename E>
E Choice(const json& j, const std::string& path,
         const std::map<std::string, E>& options) {
  const std::string value = String(j, path);
  auto it = options.find(value);
  if (it == options.end()) {
    std::string valid;
    for (const auto& [name, unused] : options) {
      valid += (valid.empty() ? "" : ", ") + name;
    }
    ParseFail(path, "unknown value \"" + value + "\" (expected one of " + valid + ")");
  }
  return it->second;
}

template <typename E>
std::string ChoiceName(E value, const std::map<std::string, E>& options) {
  for (const auto& [name, v] : options) {
    if (v == value) return name;
  }
  return "";
}

const std::map<std::string, DynamicsClass> kDynamics = {
    {"single_integrator", DynamicsClass::kSingleIntegrator},
    {"chain", DynamicsClass::kChain},
    {"unicycle", DynamicsClass::kUnicycle},
    {"car", DynamicsClass::kCar}};
const std::map<std::string, DriveType> kDrive = {{"front", DriveType::kFront},
                                                 {"rear", DriveType::kRear}};
const std::map<std::string, HigherOrderVariant> kVariant = {
    {"full_A", HigherOrderVariant::kFullA},
    {"identity_derivatives", HigherOrderVariant::kIdentityDerivatives}};
const std::map<std::string, ActuatorMode> kMode = {
    {"direct", ActuatorMode::kDirect},
    {"velocity_feedback", ActuatorMode::kVelocityFeedback}};
const std::map<std::string, ScaleFunction> kScaleFunction = {
    {"atan", ScaleFunction::kAtan}, {"tanh", ScaleFunction::kTanh}};
const std::map<std::string, SolverAlgorithm> kAlgorithm = {
    {"admm", SolverAlgorithm::kAdmm},
    {"projected_subgradient", SolverAlgorithm::kProjectedSubgradient}};

Vec2 Point(const json& j, const std::string& path) {
  const auto v = Numbers(j, path, 2);
  return Vec2(v[0], v[1]);
}

std::vector<Vec2> Points(const json& j, const std::string& path) {
  json_util::Array(j, path);
  std::vector<Vec2> out;
  for (size_t k = 0; k < j.size(); ++k) {
    out.push_back(Point(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

json PointsJson(const std::vector<Vec2>& points) {
  json out = json::array();
  for (const Vec2& p : points) out.push_back({p.x(), p.y()});
  return out;
}

UniformRange Range(const json& j, const std::string& path) {
  const auto v = Numbers(j, path, 2);
  if (v[1] < v[0]) ParseFail(path, "range upper bound below lower bound");
  return {v[0], v[1]};
}

json RangeJson(const UniformRange& r) { return {r.lo, r.hi}; }

// 1-based agent index.
int AgentIndex(const json& j, const std::string& path, int n) {
  const long long v = Integer(j, path);
  if (v < 1 || v > n) {
    ParseFail(path, "agent index " + std::to_string(v) + " outside 1.." +
                        std::to_string(n));
  }
  return static_cast<int>(v - 1);
}

Edge EdgeFrom(const json& j, const std::string& path, int n) {
  json_util::Array(j, path);
  if (j.size() != 2) ParseFail(path, "an edge is a pair of agent indices");
  return {AgentIndex(j[0], path + "[0]", n), AgentIndex(j[1], path + "[1]", n)};
}

std::optional<double> OptionalNumber(Object& o, const std::string& key) {
  if (const json* v = o.Optional(key)) return Number(*v, o.Path(key));
  return std::nullopt;
}

void PutOptional(json& out, const std::string& key, const std::optional<double>& v) {
  if (v) out[key] = *v;
}

FormationSpec ParseFormation(const json& j) {
  Object o(j, "formation");
  const auto points = Points(o.Required("coordinates"), o.Path("coordinates"));
  bool center = true;
  if (const json* c = o.Optional("center")) center = Boolean(*c, o.Path("center"));
  o.Finish();
  Vector coords(2 * static_cast<Eigen::Index>(points.size()));
  for (size_t i = 0; i < points.size(); ++i) {
    coords.segment<2>(2 * static_cast<Eigen::Index>(i)) = points[i];
  }
  try {
    return FormationSpec(coords, center);
  } catch (const Error& e) {
    ParseFail("formation", e.what());
  }
}

SensingGraph ParseGraph(Object& o, int n) {
  const json* edges = o.Optional("edges");
  const json* generator = o.Optional("generator");
  if ((edges == nullptr) == (generator == nullptr)) {
    ParseFail(o.path(), "give exactly one of \"edges\" and \"generator\"");
  }
  try {
    if (generator != nullptr) {
      const std::string g = String(*generator, o.Path("generator"));
      if (g == "complete") return SensingGraph::Complete(n);
      if (g == "cycle") return SensingGraph::Cycle(n);
      if (g == "path") return SensingGraph::Path(n);
      ParseFail(o.Path("generator"), "unknown generator \"" + g +
                                         "\" (expected complete, cycle or path)");
    }
    json_util::Array(*edges, o.Path("edges"));
    std::vector<Edge> list;
    for (size_t k = 0; k < edges->size(); ++k) {
      list.push_back(EdgeFrom((*edges)[k], o.Path("edges") + "[" + std::to_string(k) + "]", n));
    }
    return SensingGraph(n, list);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    ParseFail(o.path(), e.what());
  }
}

AgentModel ParseAgents(const json& j, int n) {
  Object o(j, "agents");
  AgentModel a;
  a.dynamics = Choice(o.Required("dynamics"), o.Path("dynamics"), kDynamics);
  if (const json* v = o.Optional("order")) {
    a.chain_order = static_cast<int>(Integer(*v, o.Path("order")));
  }
  if (const json* v = o.Optional("kinematic")) a.kinematic_only = Boolean(*v, o.Path("kinematic"));
  if (const json* v = o.Optional("drive")) a.drive = Choice(*v, o.Path("drive"), kDrive);
  if (const json* v = o.Optional("wheelbase")) a.wheelbase = Number(*v, o.Path("wheelbase"));
  if (const json* v = o.Optional("actuator")) {
    Object act(*v, o.Path("actuator"));
    const json* expl = act.Optional("explicit");
    const json* random = act.Optional("random_uniform");
    if ((expl == nullptr) == (random == nullptr)) {
      ParseFail(act.path(), "give exactly one of \"explicit\" and \"random_uniform\"");
    }
    if (expl != nullptr) {
      json_util::Array(*expl, act.Path("explicit"));
      if (static_cast<int>(expl->size()) != n) {
        ParseFail(act.Path("explicit"), "one [a, b, c, d] entry per agent");
      }
      for (size_t k = 0; k < expl->size(); ++k) {
        const auto p = Numbers((*expl)[k], act.Path("explicit") + "[" + std::to_string(k) + "]", 4);
        a.actuators.push_back({p[0], p[1], p[2], p[3]});
      }
    } else {
      a.actuator_range = Range(*random, act.Path("random_uniform"));
    }
    act.Finish();
  }
  o.Finish();
  return a;
}

json AgentsJson(const AgentModel& a) {
  json out;
  out["dynamics"] = ChoiceName(a.dynamics, kDynamics);
  out["order"] = a.chain_order;
  out["kinematic"] = a.kinematic_only;
  out["drive"] = ChoiceName(a.drive, kDrive);
  out["wheelbase"] = a.wheelbase;
  if (!a.actuators.empty()) {
    json list = json::array();
    for (const ActuatorParams& p : a.actuators) list.push_back({p.a, p.b, p.c, p.d});
    out["actuator"] = {{"explicit", list}};
  } else if (a.actuator_range) {
    out["actuator"] = {{"random_uniform", RangeJson(*a.actuator_range)}};
  }
  return out;
}

void ParseController(const json& j, int n, ControllerConfig* c,
                     std::optional<PerturbationRange>* random) {
  Object o(j, "controller");
  c->u_max = OptionalNumber(o, "u_max");
  c->v_max = OptionalNumber(o, "v_max");
  c->omega_max = OptionalNumber(o, "omega_max");
  c->phi_max = OptionalNumber(o, "phi_max");
  if (const json* v = o.Optional("k")) c->k_chain = Numbers(*v, o.Path("k"));
  if (const json* v = o.Optional("variant")) {
    c->chain_variant = Choice(*v, o.Path("variant"), kVariant);
  }
  c->k0_int = OptionalNumber(o, "k0_int");
  c->k1_int = OptionalNumber(o, "k1_int");
  if (const json* v = o.Optional("mode")) c->mode = Choice(*v, o.Path("mode"), kMode);
  c->k_s = OptionalNumber(o, "k_s");
  if (const json* v = o.Optional("scale")) {
    Object s(*v, o.Path("scale"));
    ScaleConfig scale;
    if (const json* f = s.Optional("function")) {
      scale.f = Choice(*f, s.Path("function"), kScaleFunction);
    }
    if (const json* k = s.Optional("k_f")) scale.k_f = Number(*k, s.Path("k_f"));
    const json& list = json_util::Array(s.Required("d_star"), s.Path("d_star"));
    for (size_t k = 0; k < list.size(); ++k) {
      Object e(list[k], s.Path("d_star") + "[" + std::to_string(k) + "]");
      EdgeDistance d;
      d.edge = EdgeFrom(e.Required("edge"), e.Path("edge"), n);
      if (d.edge.i > d.edge.j) std::swap(d.edge.i, d.edge.j);
      d.d_star = Number(e.Required("d"), e.Path("d"));
      e.Finish();
      scale.d_star.push_back(d);
    }
    s.Finish();
    c->scale = scale;
  }
  if (const json* v = o.Optional("perturbation")) {
    const std::string path = o.Path("perturbation");
    if (v->is_array()) {
      for (size_t k = 0; k < v->size(); ++k) {
        const auto p = Numbers((*v)[k], path + "[" + std::to_string(k) + "]", 2);
        c->perturbation.push_back({p[0], p[1]});
      }
    } else {
      Object p(*v, path);
      PerturbationRange r;
      r.c = Range(p.Required("c"), p.Path("c"));
      r.alpha = Range(p.Required("alpha"), p.Path("alpha"));
      p.Finish();
      *random = r;
    }
  }
  o.Finish();
}

json ControllerJson(const ControllerConfig& c,
                    const std::optional<PerturbationRange>& random) {
  json out = json::object();
  PutOptional(out, "u_max", c.u_max);
  PutOptional(out, "v_max", c.v_max);
  PutOptional(out, "omega_max", c.omega_max);
  PutOptional(out, "phi_max", c.phi_max);
  if (!c.k_chain.empty()) out["k"] = c.k_chain;
  out["variant"] = ChoiceName(c.chain_variant, kVariant);
  PutOptional(out, "k0_int", c.k0_int);
  PutOptional(out, "k1_int", c.k1_int);
  out["mode"] = ChoiceName(c.mode, kMode);
  PutOptional(out, "k_s", c.k_s);
  if (c.scale) {
    json list = json::array();
    for (const EdgeDistance& d : c.scale->d_star) {
      list.push_back({{"edge", {d.edge.i + 1, d.edge.j + 1}}, {"d", d.d_star}});
    }
    out["scale"] = {{"function", ChoiceName(c.scale->f, kScaleFunction)},
                    {"k_f", c.scale->k_f},
                    {"d_star", list}};
  }
  if (!c.perturbation.empty()) {
    json list = json::array();
    for (const Perturbation& p : c.perturbation) list.push_back({p.c, p.alpha});
    out["perturbation"] = list;
  } else if (random) {
    out["perturbation"] = {{"c", RangeJson(random->c)},
                           {"alpha", RangeJson(random->alpha)}};
  }
  return out;
}

SolverOptions ParseDesign(const json& j) {
  Object o(j, "design");
  SolverOptions s;
  s.trace_budget = OptionalNumber(o, "trace_budget");
  if (const json* v = o.Optional("max_iterations")) {
    s.max_iterations = static_cast<int>(Integer(*v, o.Path("max_iterations")));
  }
  if (const json* v = o.Optional("primal_tolerance")) {
    s.primal_tolerance = Number(*v, o.Path("primal_tolerance"));
  }
  if (const json* v = o.Optional("dual_tolerance")) {
    s.dual_tolerance = Number(*v, o.Path("dual_tolerance"));
  }
  s.zero_tolerance = OptionalNumber(o, "zero_tolerance");
  s.gamma_floor = OptionalNumber(o, "gamma_floor");
  if (const json* v = o.Optional("algorithm")) {
    s.algorithm = Choice(*v, o.Path("algorithm"), kAlgorithm);
  }
  if (const json* v = o.Optional("initial_rho")) {
    s.initial_rho = Number(*v, o.Path("initial_rho"));
  }
  if (const json* v = o.Optional("tie_neighborhoods")) {
    s.tie_neighborhoods = Boolean(*v, o.Path("tie_neighborhoods"));
  }
  o.Finish();
  return s;
}

json DesignJson(const SolverOptions& s) {
  json out;
  PutOptional(out, "trace_budget", s.trace_budget);
  out["max_iterations"] = s.max_iterations;
  out["primal_tolerance"] = s.primal_tolerance;
  out["dual_tolerance"] = s.dual_tolerance;
  PutOptional(out, "zero_tolerance", s.zero_tolerance);
  PutOptional(out, "gamma_floor", s.gamma_floor);
  out["algorithm"] = ChoiceName(s.algorithm, kAlgorithm);
  out["initial_rho"] = s.initial_rho;
  out["tie_neighborhoods"] = s.tie_neighborhoods;
  return out;
}

SimConfig ParseSim(const json& j) {
  Object o(j, "sim");
  SimConfig s;
  if (const json* v = o.Optional("dt")) s.dt = Number(*v, o.Path("dt"));
  if (const json* v = o.Optional("t_final")) s.t_final = Number(*v, o.Path("t_final"));
  if (const json* v = o.Optional("seed")) {
    const long long seed = Integer(*v, o.Path("seed"));
    if (seed < 0) ParseFail(o.Path("seed"), "seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (const json* v = o.Optional("initial")) {
    Object init(*v, o.Path("initial"));
    const json* positions = init.Optional("positions");
    const json* box = init.Optional("random_box");
    if ((positions == nullptr) == (box == nullptr)) {
      ParseFail(init.path(), "give exactly one of \"positions\" and \"random_box\"");
    }
    if (positions != nullptr) {
      s.initial.positions = Points(*positions, init.Path("positions"));
    } else {
      s.initial.box = Range(*box, init.Path("random_box"));
    }
    if (const json* h = init.Optional("headings")) {
      s.initial.headings = Numbers(*h, init.Path("headings"));
    }
    if (const json* m = init.Optional("min_separation")) {
      s.initial.min_separation = Number(*m, init.Path("min_separation"));
    }
    init.Finish();
  }
  if (const json* v = o.Optional("noise")) s.noise_amplitude = Number(*v, o.Path("noise"));
  if (const json* v = o.Optional("disturbance")) {
    s.disturbance = Points(*v, o.Path("disturbance"));
  }
  if (const json* v = o.Optional("local_frames")) {
    s.local_frames = Boolean(*v, o.Path("local_frames"));
  }
  if (const json* v = o.Optional("convergence_threshold")) {
    s.convergence_threshold = Number(*v, o.Path("convergence_threshold"));
  }
  if (const json* v = o.Optional("sustain")) s.sustain_time = Number(*v, o.Path("sustain"));
  o.Finish();
  return s;
}

json SimJson(const SimConfig& s) {
  json out;
  out["dt"] = s.dt;
  out["t_final"] = s.t_final;
  out["seed"] = s.seed;
  json init;
  if (!s.initial.positions.empty()) {
    init["positions"] = PointsJson(s.initial.positions);
  } else {
    init["random_box"] = RangeJson(s.initial.box);
  }
  if (!s.initial.headings.empty()) init["headings"] = s.initial.headings;
  init["min_separation"] = s.initial.min_separation;
  out["initial"] = init;
  out["noise"] = s.noise_amplitude;
  if (!s.disturbance.empty()) out["disturbance"] = PointsJson(s.disturbance);
  out["local_frames"] = s.local_frames;
  out["convergence_threshold"] = s.convergence_threshold;
  out["sustain"] = s.sustain_time;
  return out;
}

}  // namespace

Scenario ScenarioFromJson(const json& doc) {
  Object root(doc, "$");
  const long long version = Integer(root.Required("version"), "$.version");
  if (version != kScenarioVersion) {
    ParseFail("$.version", "unsupported version " + std::to_string(version));
  }
  Scenario s;
  if (const json* v = root.Optional("name")) s.name = String(*v, "$.name");
  s.formation = ParseFormation(root.Required("formation"));
  const int n = s.formation.num_agents();

  const json& graphs = json_util::Array(root.Required("graphs"), "graphs");
  if (graphs.empty()) ParseFail("graphs", "at least one graph is required");
  std::map<std::string, int> by_name;
  for (size_t k = 0; k < graphs.size(); ++k) {
    Object g(graphs[k], "graphs[" + std::to_string(k) + "]");
    const std::string name = String(g.Required("name"), g.Path("name"));
    if (by_name.count(name)) ParseFail(g.Path("name"), "duplicate graph name \"" + name + "\"");
    by_name[name] = static_cast<int>(k);
    s.topology_names.push_back(name);
    s.topologies.push_back(ParseGraph(g, n));
    g.Finish();
  }

  if (const json* sched = root.Optional("schedule")) {
    json_util::Array(*sched, "schedule");
    for (size_t k = 0; k < sched->size(); ++k) {
      Object e((*sched)[k], "schedule[" + std::to_string(k) + "]");
      ScheduleEntry entry;
      entry.time = Number(e.Required("t"), e.Path("t"));
      const std::string name = String(e.Required("graph"), e.Path("graph"));
      auto it = by_name.find(name);
      if (it == by_name.end()) ParseFail(e.Path("graph"), "no graph named \"" + name + "\"");
      entry.topology = it->second;
      e.Finish();
      s.schedule.push_back(entry);
    }
  } else {
    s.schedule = {{0.0, 0}};
  }

  if (const json* v = root.Optional("agents")) s.agents = ParseAgents(*v, n);
  if (const json* v = root.Optional("controller")) {
    ParseController(*v, n, &s.controller, &s.random_perturbation);
  }
  if (const json* v = root.Optional("avoidance")) {
    Object a(*v, "avoidance");
    AvoidanceConfig cfg;
    cfg.r = Number(a.Required("r"), a.Path("r"));
    cfg.d_c = Number(a.Required("d_c"), a.Path("d_c"));
    a.Finish();
    s.avoidance = cfg;
  }
  if (const json* v = root.Optional("design")) s.design = ParseDesign(*v);
  if (const json* v = root.Optional("sim")) s.sim = ParseSim(*v);
  root.Finish();

  try {
    ValidateScenario(s);
  } catch (const Error& e) {
    Fail(ErrorCode::kParse, e.what());
  }
  return s;
}

json ScenarioToJson(const Scenario& s) {
  json doc;
  doc["version"] = kScenarioVersion;
  if (!s.name.empty()) doc["name"] = s.name;
  json coords = json::array();
  const Vector& raw = s.formation.raw();
  for (Eigen::Index i = 0; i + 1 < raw.size(); i += 2) coords.push_back({raw[i], raw[i + 1]});
  doc["formation"] = {{"coordinates", coords}, {"center", s.formation.centered()}};

  json graphs = json::array();
  for (size_t k = 0; k < s.topologies.size(); ++k) {
    json edges = json::array();
    for (const Edge& e : s.topologies[k].edges()) edges.push_back({e.i + 1, e.j + 1});
    const std::string name = k < s.topology_names.size() ? s.topology_names[k]
                                                         : "G" + std::to_string(k + 1);
    graphs.push_back({{"name", name}, {"edges", edges}});
  }
  doc["graphs"] = graphs;
  json sched = json::array();
  for (const ScheduleEntry& e : s.schedule) {
    sched.push_back({{"t", e.time}, {"graph", graphs[e.topology]["name"]}});
  }
  doc["schedule"] = sched;
  doc["agents"] = AgentsJson(s.agents);
  doc["controller"] = ControllerJson(s.controller, s.random_perturbation);
  if (s.avoidance) doc["avoidance"] = {{"r", s.avoidance->r}, {"d_c", s.avoidance->d_c}};
  doc["design"] = DesignJson(s.design);
  doc["sim"] = SimJson(s.sim);
  return doc;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

Scenario LoadScenario(const std::string& path) {
  const std::string text = ReadFile(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return ScenarioFromJson(doc);
}

void SaveScenario(const Scenario& scenario, const std::string& path) {
  WriteFile(path, ScenarioToJson(scenario).dump(2) + "\n");
}

}  // namespace formation
