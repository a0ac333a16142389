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

#include "formation/simulation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "formation/errors.h"
#include "formation/random.h"

namespace formation {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxPlacementAttempts = 100000;
// Independent stream for measurement noise so enabling it leaves every other
// seeded draw unchanged.
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;

bool Nonholonomic(DynamicsClass d) {
  return d == DynamicsClass::kUnicycle || d == DynamicsClass::kCar;
}

bool UsesActuators(const AgentModel& model) {
  return Nonholonomic(model.dynamics) && !model.kinematic_only;
}

std::string Where(const std::string& field) { return "scenario " + field + ": "; }

void Require(bool ok, const std::string& message) {
  if (!ok) Fail(ErrorCode::kConfiguration, message);
}

double SafeSubspaceError(const Vector& q, const KernelBasis& basis) {
  if (q.norm() == 0.0) return 0.0;
  return SubspaceError(q, basis);
}

// Largest |eigenvalue| of a symmetric matrix.
double SpectralNorm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

class Engine {
 public:
  Engine(const Scenario& scenario, const std::vector<GainMatrix>& gains,
         const ResolvedScenario& resolved)
      : s_(scenario),
        gains_(gains),
        resolved_(resolved),
        n_(scenario.formation.num_agents()),
        w_(StateWidth(scenario.agents)),
        m_(scenario.agents.chain_order),
        basis_(BuildKernelBasis(scenario.formation)),
        noise_rng_(scenario.sim.seed ^ kNoiseStream) {
    limits_.v_max = s_.controller.v_max;
    limits_.omega_max = s_.controller.omega_max;
    rows_.resize(gains_.size());
    for (size_t k = 0; k < gains_.size(); ++k) {
      for (int i = 0; i < n_; ++i) rows_[k].push_back(gains_[k].Row(i));
    }
    if (s_.controller.scale) {
      d_star_.resize(n_);
      for (const EdgeDistance& e : s_.controller.scale->d_star) {
        d_star_[e.edge.i].push_back({e.edge.j, e.d_star});
        d_star_[e.edge.j].push_back({e.edge.i, e.d_star});
      }
    }
    integral_.resize(n_);
    decisions_.resize(n_);
  }

  TrajectoryLog Run();

 private:
  Vec2 Position(const Vector& x, int i) const {
    return x.segment<2>(static_cast<Eigen::Index>(i) * w_);
  }
  Vector Positions(const Vector& x) const {
    Vector q(2 * n_);
    for (int i = 0; i < n_; ++i) q.segment<2>(2 * i) = Position(x, i);
    return q;
  }
  double Theta(const Vector& x, int i) const { return x[i * w_ + 2]; }

  // Angle of agent i's body frame relative to the global frame.
  double FrameAngle(const Vector& x, int i) const {
    if (!s_.sim.local_frames) return 0.0;
    if (Nonholonomic(s_.agents.dynamics)) return Theta(x, i);
    return resolved_.frame_angles[i];
  }

  Vector InitialState() const;
  UnicycleState UnpackUnicycle(const Vector& x, int i) const;
  CarState UnpackCar(const Vector& x, int i) const;

  // Consensus term of agent i in its own frame.
  Vec2 LocalTerm(const Vector& x, int i, const Mat2& r_t) const;
  // Desired planar control of agent i in the global frame, before avoidance.
  Vec2 PlanarControl(const Vector& x, int i) const;
  // Two scalar inputs (or a planar command) and the state derivative.
  Vec2 AgentInputs(const Vector& x, int i, const Vec2& u) const;
  void AgentDerivative(const Vector& x, int i, const Vec2& inputs,
                       Eigen::Ref<Vector> dx) const;

  // Full closed-loop field with the current step's held decisions.
  Vector Field(const Vector& x, Vector* commands) const;
  void StartStep(const Vector& x);
  FormationMetrics Metrics(const Vector& x) const;

  const Scenario& s_;
  const std::vector<GainMatrix>& gains_;
  const ResolvedScenario& resolved_;
  int n_;
  int w_;
  int m_;
  KernelBasis basis_;
  InputLimits limits_;
  std::vector<std::vector<std::vector<NeighborGain>>> rows_;
  std::vector<std::vector<DesiredDistance>> d_star_;
  Rng noise_rng_;

  // Held for the duration of one step.
  int topology_ = 0;
  std::vector<IntegralState> integral_;
  std::vector<AvoidanceDecision> decisions_;
  std::map<std::pair<int, int>, Vec2> noise_;
};

Vector Engine::InitialState() const {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(n_) * w_);
  for (int i = 0; i < n_; ++i) {
    auto seg = x.segment(static_cast<Eigen::Index>(i) * w_, w_);
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, SingleIntegratorState>) {
            seg.template head<2>() = st.q;
          } else if constexpr (std::is_same_v<T, ChainState>) {
            for (int l = 0; l <= m_; ++l) seg.template segment<2>(2 * l) = st.derivatives[l];
          } else if constexpr (std::is_same_v<T, UnicycleState>) {
            seg.template head<2>() = st.q;
            seg[2] = st.theta;
            if (!st.kinematic_only) {
              seg[3] = st.v;
              seg[4] = st.omega;
            }
          } else {
            seg.template head<2>() = st.q;
            seg[2] = st.theta;
            seg[3] = st.phi;
            if (!st.kinematic_only) {
              seg[4] = st.v;
              seg[5] = st.omega;
            }
          }
        },
        resolved_.initial[i]);
  }
  return x;
}

UnicycleState Engine::UnpackUnicycle(const Vector& x, int i) const {
  UnicycleState st;
  const Eigen::Index o = static_cast<Eigen::Index>(i) * w_;
  st.q = x.segment<2>(o);
  st.theta = x[o + 2];
  st.kinematic_only = s_.agents.kinematic_only;
  if (!st.kinematic_only) {
    st.v = x[o + 3];
    st.omega = x[o + 4];
  }
  return st;
}

CarState Engine::UnpackCar(const Vector& x, int i) const {
  CarState st;
  const Eigen::Index o = static_cast<Eigen::Index>(i) * w_;
  st.q = x.segment<2>(o);
  st.theta = x[o + 2];
  st.phi = x[o + 3];
  st.wheelbase = s_.agents.wheelbase;
  st.drive = s_.agents.drive;
  st.kinematic_only = s_.agents.kinematic_only;
  if (!st.kinematic_only) {
    st.v = x[o + 4];
    st.omega = x[o + 5];
  }
  return st;
}

Vec2 Engine::LocalTerm(const Vector& x, int i, const Mat2& r_t) const {
  const auto& row = rows_[topology_][i];
  std::vector<RelativeMeasurement> rel;
  rel.reserve(row.size());
  const Vec2 qi = Position(x, i);
  for (const NeighborGain& g : row) {
    Vec2 offset = r_t * (Position(x, g.j) - qi);
    if (!noise_.empty()) offset += noise_.at({i, g.j});
    rel.push_back({g.j, offset});
  }
  if (s_.controller.scale) {
    return ScaleAugmentedControl(rel, row, d_star_[i], s_.controller.scale->f,
                                 s_.controller.scale->k_f);
  }
  return SingleIntegratorControl(rel, row);
}

Vec2 Engine::PlanarControl(const Vector& x, int i) const {
  const double angle = FrameAngle(x, i);
  const Mat2 r = Rotation(angle);
  const Mat2 r_t = r.transpose();
  Vec2 u_local;
  if (s_.agents.dynamics == DynamicsClass::kChain) {
    const Eigen::Index o = static_cast<Eigen::Index>(i) * w_;
    const auto& row = rows_[topology_][i];
    const bool full = s_.controller.chain_variant == HigherOrderVariant::kFullA;
    std::vector<ChainMeasurement> rel;
    rel.reserve(row.size());
    for (const NeighborGain& g : row) {
      ChainMeasurement meas;
      meas.j = g.j;
      const Eigen::Index oj = static_cast<Eigen::Index>(g.j) * w_;
      const int levels = full ? m_ : 0;
      for (int l = 0; l <= levels; ++l) {
        meas.relative.push_back(
            r_t * (x.segment<2>(oj + 2 * l) - x.segment<2>(o + 2 * l)));
      }
      if (!noise_.empty()) meas.relative[0] += noise_.at({i, g.j});
      rel.push_back(std::move(meas));
    }
    std::vector<Vec2> own;
    for (int l = 1; l <= m_; ++l) own.push_back(r_t * x.segment<2>(o + 2 * l));
    u_local = HigherOrderControl(rel, own, row, s_.controller.k_chain,
                                 s_.controller.chain_variant);
  } else {
    u_local = LocalTerm(x, i, r_t);
    if (s_.controller.k0_int) {
      u_local = *s_.controller.k0_int * u_local +
                s_.controller.k1_int.value_or(0.0) * integral_[i].accumulator;
    }
  }
  if (!resolved_.perturbation.empty()) {
    const Perturbation& p = resolved_.perturbation[i];
    u_local = PerturbControl(u_local, p.c, p.alpha);
  }
  return r * u_local;
}

Vec2 Engine::AgentInputs(const Vector& x, int i, const Vec2& u_raw) const {
  Vec2 u = ApplyAvoidance(u_raw, decisions_[i]);
  const ControllerConfig& c = s_.controller;
  switch (s_.agents.dynamics) {
    case DynamicsClass::kSingleIntegrator:
    case DynamicsClass::kChain:
      return c.u_max ? SaturateNorm(u, *c.u_max) : u;
    case DynamicsClass::kUnicycle: {
      const UnicycleState st = UnpackUnicycle(x, i);
      if (st.kinematic_only) {
        const VelocityCommand cmd = UnicycleControl(st.heading(), u);
        return Vec2(Clamp(cmd.v, c.v_max), Clamp(cmd.omega, c.omega_max));
      }
      const ActuatorCommand cmd =
          UnicycleActuatorControl(st.heading(), u, st.v, c.mode, c.k_s);
      return Vec2(Clamp(cmd.s, c.v_max), Clamp(cmd.r, c.omega_max));
    }
    case DynamicsClass::kCar: {
      const CarState st = UnpackCar(x, i);
      if (st.kinematic_only) {
        const VelocityCommand cmd = CarControl(st.steering(), u, st.drive, st.phi);
        return Vec2(Clamp(cmd.v, c.v_max), Clamp(cmd.omega, c.omega_max));
      }
      ActuatorCommand cmd =
          CarActuatorControl(st.steering(), u, st.v, c.mode, c.k_s);
      if (st.drive == DriveType::kRear) {
        // The internal speed is the rear-wheel speed.
        const double along = std::cos(st.phi) * st.steering().dot(u);
        cmd.s = c.mode == ActuatorMode::kDirect ? along
                                                : -*c.k_s * (st.v - along);
      }
      return Vec2(Clamp(cmd.s, c.v_max), Clamp(cmd.r, c.omega_max));
    }
  }
  return u;
}

void Engine::AgentDerivative(const Vector& x, int i, const Vec2& inputs,
                             Eigen::Ref<Vector> dx) const {
  const Eigen::Index o = static_cast<Eigen::Index>(i) * w_;
  switch (s_.agents.dynamics) {
    case DynamicsClass::kSingleIntegrator: {
      Vec2 v = inputs;
      if (!s_.sim.disturbance.empty()) v += s_.sim.disturbance[i];
      dx.head<2>() = v;
      return;
    }
    case DynamicsClass::kChain:
      dx.head(2 * m_) = x.segment(o + 2, 2 * m_);
      dx.segment<2>(2 * m_) = inputs;
      return;
    case DynamicsClass::kUnicycle: {
      const ActuatorParams p =
          resolved_.actuators.empty() ? ActuatorParams{} : resolved_.actuators[i];
      const UnicycleState d =
          DerivUnicycle(UnpackUnicycle(x, i), inputs.x(), inputs.y(), p, limits_);
      dx.head<2>() = d.q;
      dx[2] = d.theta;
      if (!s_.agents.kinematic_only) {
        dx[3] = d.v;
        dx[4] = d.omega;
      }
      return;
    }
    case DynamicsClass::kCar: {
      const ActuatorParams p =
          resolved_.actuators.empty() ? ActuatorParams{} : resolved_.actuators[i];
      const CarState d = DerivCar(UnpackCar(x, i), inputs.x(), inputs.y(), p,
                                  limits_, s_.controller.phi_max);
      dx.head<2>() = d.q;
      dx[2] = d.theta;
      dx[3] = d.phi;
      if (!s_.agents.kinematic_only) {
        dx[4] = d.v;
        dx[5] = d.omega;
      }
      return;
    }
  }
}

Vector Engine::Field(const Vector& x, Vector* commands) const {
  Vector dx(x.size());
  if (commands != nullptr) commands->resize(2 * n_);
  for (int i = 0; i < n_; ++i) {
    const Vec2 inputs = AgentInputs(x, i, PlanarControl(x, i));
    if (commands != nullptr) commands->segment<2>(2 * i) = inputs;
    AgentDerivative(x, i, inputs, dx.segment(static_cast<Eigen::Index>(i) * w_, w_));
  }
  return dx;
}

void Engine::StartStep(const Vector& x) {
  noise_.clear();
  if (s_.sim.noise_amplitude > 0.0) {
    const double a = s_.sim.noise_amplitude;
    for (int i = 0; i < n_; ++i) {
      for (const NeighborGain& g : rows_[topology_][i]) {
        const double nx = noise_rng_.Uniform(-a, a);
        const double ny = noise_rng_.Uniform(-a, a);
        noise_[{i, g.j}] = Vec2(nx, ny);
      }
    }
  }
  if (s_.controller.k0_int) {
    const double dt = s_.sim.dt;
    for (int i = 0; i < n_; ++i) {
      const Vec2 term = LocalTerm(x, i, Rotation(FrameAngle(x, i)).transpose());
      IntegralState& st = integral_[i];
      if (st.started) {
        st.accumulator += 0.5 * dt * (st.last_term + term);
      } else {
        st.started = true;
      }
      st.last_term = term;
    }
  }
  for (AvoidanceDecision& d : decisions_) d = AvoidanceDecision{};
  if (s_.avoidance) {
    std::vector<Vec2> positions(n_);
    for (int i = 0; i < n_; ++i) positions[i] = Position(x, i);
    std::vector<Vec2> others;
    others.reserve(n_ - 1);
    for (int i = 0; i < n_; ++i) {
      others.clear();
      for (int j = 0; j < n_; ++j) {
        if (j != i) others.push_back(positions[j]);
      }
      const auto cones = BuildCones(positions[i], others, *s_.avoidance);
      decisions_[i] = DecideAvoidance(PlanarControl(x, i), cones);
    }
  }
}

FormationMetrics Engine::Metrics(const Vector& x) const {
  const Vector q = Positions(x);
  FormationMetrics m;
  m.subspace_error = SafeSubspaceError(q, basis_);
  m.lyapunov_value = LyapunovValue(q, gains_[topology_].assembled());
  m.min_pairwise_distance = MinPairwiseDistance(q);
  return m;
}

TrajectoryLog Engine::Run() {
  const auto start = std::chrono::steady_clock::now();
  const SimConfig& sim = s_.sim;
  const double dt = sim.dt;
  const long steps = static_cast<long>(std::floor(sim.t_final / dt + 1e-9));

  TrajectoryLog log;
  log.dynamics = s_.agents.dynamics;
  log.num_agents = n_;
  log.state_width = w_;
  log.chain_order = s_.agents.dynamics == DynamicsClass::kChain ? m_ : 0;
  log.kinematic_only = s_.agents.kinematic_only;
  log.seed = sim.seed;
  log.dt = dt;
  if (UsesActuators(s_.agents)) {
    for (const ActuatorParams& p : resolved_.actuators) {
      log.velocity_weights.push_back(1.0 / p.b);
    }
  }
  log.times.reserve(steps + 1);
  log.states.reserve(steps + 1);
  log.commands.reserve(steps + 1);
  log.metrics.reserve(steps + 1);
  log.topology.reserve(steps + 1);

  Vector x = InitialState();
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    // Nudge past rounding in k * dt so a switch lands on its own step.
    topology_ = ActiveTopology(s_.schedule, t + 1e-9 * dt);
    StartStep(x);
    Vector command;
    const Vector k1 = Field(x, &command);
    log.times.push_back(t);
    log.states.push_back(x);
    log.commands.push_back(command);
    log.metrics.push_back(Metrics(x));
    log.topology.push_back(topology_);
    if (k == steps) break;

    const Vector k2 = Field(x + 0.5 * dt * k1, nullptr);
    const Vector k3 = Field(x + 0.5 * dt * k2, nullptr);
    const Vector k4 = Field(x + dt * k3, nullptr);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s_.agents.dynamics == DynamicsClass::kCar && s_.controller.phi_max) {
      for (int i = 0; i < n_; ++i) {
        double& phi = x[i * w_ + 3];
        phi = std::clamp(phi, -*s_.controller.phi_max, *s_.controller.phi_max);
      }
    }
  }

  log.final_subspace_error = log.metrics.back().subspace_error;
  log.min_distance = std::numeric_limits<double>::infinity();
  for (const FormationMetrics& m : log.metrics) {
    log.min_distance = std::min(log.min_distance, m.min_pairwise_distance);
  }

  // Convergence: the trailing run below threshold spans the sustain window.
  size_t first = log.metrics.size();
  while (first > 0 &&
         log.metrics[first - 1].subspace_error < sim.convergence_threshold) {
    --first;
  }
  if (first < log.metrics.size()) {
    const double span = log.times.back() - log.times[first];
    log.converged = span >= sim.sustain_time - 1e-9 * dt;
    log.convergence_time = log.times[first];
  }

  log.lyapunov_violations = LyapunovMonitor(log, gains_).violations;
  log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return log;
}

}  // namespace

std::string DynamicsName(DynamicsClass dynamics) {
  switch (dynamics) {
    case DynamicsClass::kSingleIntegrator:
      return "single_integrator";
    case DynamicsClass::kChain:
      return "chain";
    case DynamicsClass::kUnicycle:
      return "unicycle";
    case DynamicsClass::kCar:
      return "car";
  }
  return "unknown";
}

void CheckScenarioGains(const Scenario& s, const std::vector<GainMatrix>& gains) {
  if (gains.size() != s.topologies.size()) {
    Fail(ErrorCode::kConfiguration,
         "expected " + std::to_string(s.topologies.size()) +
             " gain matrices, got " + std::to_string(gains.size()));
  }
  const int n = s.formation.num_agents();
  const KernelBasis basis = BuildKernelBasis(s.formation);
  for (size_t k = 0; k < gains.size(); ++k) {
    const std::string name = k < s.topology_names.size() && !s.topology_names[k].empty()
                                 ? s.topology_names[k]
                                 : std::to_string(k);
    if (gains[k].num_agents() != n) {
      Fail(ErrorCode::kDimension, "gains for topology " + name + " have " +
                                      std::to_string(gains[k].num_agents()) +
                                      " agents, formation has " + std::to_string(n));
    }
    for (const EdgeGain& g : gains[k].edge_gains()) {
      if (!s.topologies[k].HasEdge(g.edge.i, g.edge.j)) {
        Fail(ErrorCode::kConfiguration,
             "gain on non-edge {" + std::to_string(g.edge.i + 1) + "," +
                 std::to_string(g.edge.j + 1) + "} in topology " + name);
      }
    }
    const SpectrumReport report = VerifyGains(gains[k], basis);
    if (!report.passed) {
      Fail(ErrorCode::kGuaranteeViolation,
           "gains for topology " + name + " fail verification (zero count " +
               std::to_string(report.zero_count) + ", kernel residual " +
               std::to_string(report.kernel_residual) + ")");
    }
    if (s.agents.dynamics == DynamicsClass::kChain) {
      const HurwitzReport h = VerifyHigherOrderGains(
          NonzeroSpectrum(report), s.controller.k_chain, s.controller.chain_variant);
      if (!h.passed) {
        Fail(ErrorCode::kGuaranteeViolation,
             "chain gains are not Hurwitz on topology " + name + " at mu = " +
                 std::to_string(h.worst_mu) + " (max real part " +
                 std::to_string(h.worst_real_part) + ")");
      }
    }
  }
}

int StateWidth(const AgentModel& model) {
  switch (model.dynamics) {
    case DynamicsClass::kSingleIntegrator:
      return 2;
    case DynamicsClass::kChain:
      return 2 * (model.chain_order + 1);
    case DynamicsClass::kUnicycle:
      return model.kinematic_only ? 3 : 5;
    case DynamicsClass::kCar:
      return model.kinematic_only ? 4 : 6;
  }
  return 2;
}

void ValidateScenario(const Scenario& s) {
  const int n = s.formation.num_agents();
  Require(n >= 3, Where("formation") + "needs at least 3 agents");
  Require(!s.topologies.empty(), Where("graphs") + "at least one topology");
  Require(s.topology_names.empty() || s.topology_names.size() == s.topologies.size(),
          Where("graphs") + "one name per topology");
  for (const SensingGraph& g : s.topologies) {
    Require(g.num_agents() == n, Where("graphs") + "topology size differs from formation");
  }
  Require(!s.schedule.empty() && s.schedule.front().time == 0.0,
          Where("schedule") + "must start at t = 0");
  for (size_t k = 0; k < s.schedule.size(); ++k) {
    const ScheduleEntry& e = s.schedule[k];
    Require(e.topology >= 0 && e.topology < static_cast<int>(s.topologies.size()),
            Where("schedule") + "topology index out of range");
    if (k > 0) {
      Require(e.time > s.schedule[k - 1].time,
              Where("schedule") + "times must be strictly increasing");
    }
  }

  const AgentModel& a = s.agents;
  if (a.dynamics == DynamicsClass::kChain) {
    Require(a.chain_order >= 1, Where("agents") + "chain order must be at least 1");
    Require(static_cast<int>(s.controller.k_chain.size()) == a.chain_order + 1,
            Where("controller") + "k needs chain order + 1 entries");
  }
  if (a.dynamics == DynamicsClass::kCar) {
    Require(a.wheelbase > 0.0, Where("agents") + "wheelbase must be positive");
  }
  Require(a.actuators.empty() || static_cast<int>(a.actuators.size()) == n,
          Where("agents") + "one actuator entry per agent");
  for (const ActuatorParams& p : a.actuators) {
    Require(p.a > 0.0 && p.b > 0.0 && p.c > 0.0 && p.d > 0.0,
            Where("agents") + "actuator parameters must be positive");
  }
  if (a.actuator_range) {
    Require(a.actuator_range->lo > 0.0 && a.actuator_range->hi >= a.actuator_range->lo,
            Where("agents") + "actuator range must be positive and ordered");
  }

  ValidateControllerConfig(s.controller);
  const ControllerConfig& c = s.controller;
  const bool si = a.dynamics == DynamicsClass::kSingleIntegrator;
  Require(!c.k0_int || si, Where("controller") + "integral action needs single integrators");
  Require(!c.scale || si, Where("controller") + "scale term needs single integrators");
  Require(!(c.scale && c.k0_int),
          Where("controller") + "scale term and integral action are exclusive");
  if (c.scale) {
    for (const SensingGraph& g : s.topologies) {
      for (const Edge& e : g.edges()) {
        bool found = false;
        for (const EdgeDistance& d : c.scale->d_star) {
          found = found || (d.edge.i == e.i && d.edge.j == e.j);
        }
        Require(found, Where("controller") + "scale term needs d* on every edge");
      }
    }
  }
  Require(c.perturbation.empty() || static_cast<int>(c.perturbation.size()) == n,
          Where("controller") + "one perturbation per agent");
  Require(!(s.random_perturbation && !c.perturbation.empty()),
          Where("controller") + "perturbation is either explicit or random");
  if (s.random_perturbation) {
    const PerturbationRange& r = *s.random_perturbation;
    Require(r.c.lo > 0.0 && r.c.hi >= r.c.lo,
            Where("controller") + "perturbation c range must be positive");
    Require(r.alpha.hi >= r.alpha.lo && std::abs(r.alpha.lo) < kPi / 2 &&
                std::abs(r.alpha.hi) < kPi / 2,
            Where("controller") + "perturbation angles must stay inside (-pi/2, pi/2)");
  }
  if (s.avoidance) ValidateAvoidanceConfig(*s.avoidance);

  const SimConfig& sim = s.sim;
  Require(sim.dt > 0.0, Where("sim") + "dt must be positive");
  Require(sim.t_final > sim.dt, Where("sim") + "t_final must exceed dt");
  Require(sim.noise_amplitude >= 0.0, Where("sim") + "noise must be non-negative");
  Require(sim.convergence_threshold > 0.0 && sim.sustain_time >= 0.0,
          Where("sim") + "bad convergence settings");
  Require(sim.disturbance.empty() || (si && static_cast<int>(sim.disturbance.size()) == n),
          Where("sim") + "disturbance needs one entry per single integrator");
  const InitialStateSpec& init = sim.initial;
  Require(init.positions.empty() || static_cast<int>(init.positions.size()) == n,
          Where("sim.initial") + "one position per agent");
  Require(init.headings.empty() || static_cast<int>(init.headings.size()) == n,
          Where("sim.initial") + "one heading per agent");
  Require(init.box.hi > init.box.lo, Where("sim.initial") + "empty box");
  Require(init.min_separation >= 0.0, Where("sim.initial") + "negative separation");
}

int ActiveTopology(const std::vector<ScheduleEntry>& schedule, double t) {
  if (!(t >= 0.0)) Fail(ErrorCode::kConfiguration, "negative time in schedule lookup");
  if (schedule.empty()) Fail(ErrorCode::kConfiguration, "empty schedule");
  auto it = std::upper_bound(
      schedule.begin(), schedule.end(), t,
      [](double value, const ScheduleEntry& e) { return value < e.time; });
  if (it == schedule.begin()) Fail(ErrorCode::kConfiguration, "schedule starts after t");
  return std::prev(it)->topology;
}

ResolvedScenario Resolve(const Scenario& s) {
  ValidateScenario(s);
  const int n = s.formation.num_agents();
  const AgentModel& a = s.agents;
  const SimConfig& sim = s.sim;
  Rng rng(sim.seed);
  ResolvedScenario out;

  std::vector<Vec2> positions = sim.initial.positions;
  if (positions.empty()) {
    const UniformRange box = sim.initial.box;
    const double sep = sim.initial.min_separation;
    for (int i = 0; i < n; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
        const double px = rng.Uniform(box.lo, box.hi);
        const double py = rng.Uniform(box.lo, box.hi);
        const Vec2 p(px, py);
        placed = std::all_of(positions.begin(), positions.end(),
                             [&](const Vec2& o) { return (o - p).norm() >= sep; });
        if (placed) positions.push_back(p);
      }
      if (!placed) {
        Fail(ErrorCode::kConfiguration,
             "cannot place agent " + std::to_string(i + 1) + " with separation " +
                 std::to_string(sep));
      }
    }
  }

  std::vector<double> headings = sim.initial.headings;
  if (Nonholonomic(a.dynamics) && headings.empty()) {
    for (int i = 0; i < n; ++i) headings.push_back(rng.Uniform(-kPi, kPi));
  }

  if (UsesActuators(a)) {
    out.actuators = a.actuators;
    if (out.actuators.empty() && a.actuator_range) {
      const UniformRange r = *a.actuator_range;
      for (int i = 0; i < n; ++i) {
        ActuatorParams p;
        p.a = rng.Uniform(r.lo, r.hi);
        p.b = rng.Uniform(r.lo, r.hi);
        p.c = rng.Uniform(r.lo, r.hi);
        p.d = rng.Uniform(r.lo, r.hi);
        out.actuators.push_back(p);
      }
    }
    if (out.actuators.empty()) out.actuators.assign(n, ActuatorParams{});
  }

  out.perturbation = s.controller.perturbation;
  if (s.random_perturbation) {
    for (int i = 0; i < n; ++i) {
      Perturbation p;
      p.c = rng.Uniform(s.random_perturbation->c.lo, s.random_perturbation->c.hi);
      p.alpha = rng.Uniform(s.random_perturbation->alpha.lo,
                            s.random_perturbation->alpha.hi);
      out.perturbation.push_back(p);
    }
  }

  out.frame_angles.assign(n, 0.0);
  if (sim.local_frames && !Nonholonomic(a.dynamics)) {
    for (int i = 0; i < n; ++i) out.frame_angles[i] = rng.Uniform(-kPi, kPi);
  }

  for (int i = 0; i < n; ++i) {
    switch (a.dynamics) {
      case DynamicsClass::kSingleIntegrator:
        out.initial.emplace_back(SingleIntegratorState{positions[i]});
        break;
      case DynamicsClass::kChain: {
        ChainState st;
        st.derivatives.assign(a.chain_order + 1, Vec2::Zero());
        st.derivatives[0] = positions[i];
        out.initial.emplace_back(std::move(st));
        break;
      }
      case DynamicsClass::kUnicycle: {
        UnicycleState st;
        st.q = positions[i];
        st.theta = headings[i];
        st.kinematic_only = a.kinematic_only;
        out.initial.emplace_back(st);
        break;
      }
      case DynamicsClass::kCar: {
        CarState st;
        st.q = positions[i];
        st.theta = headings[i];
        st.wheelbase = a.wheelbase;
        st.drive = a.drive;
        st.kinematic_only = a.kinematic_only;
        out.initial.emplace_back(st);
        break;
      }
    }
  }
  return out;
}

Vector InitialPositions(const ResolvedScenario& resolved) {
  Vector q(2 * static_cast<Eigen::Index>(resolved.initial.size()));
  for (size_t i = 0; i < resolved.initial.size(); ++i) {
    q.segment<2>(2 * static_cast<Eigen::Index>(i)) = std::visit(
        [](const auto& st) -> Vec2 {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, ChainState>) {
            return st.derivatives[0];
          } else {
            return st.q;
          }
        },
        resolved.initial[i]);
  }
  return q;
}

Vector TrajectoryLog::Positions(size_t step) const {
  Vector q(2 * num_agents);
  for (int i = 0; i < num_agents; ++i) {
    q.segment<2>(2 * i) = states[step].segment<2>(static_cast<Eigen::Index>(i) * state_width);
  }
  return q;
}

TrajectoryLog Run(const Scenario& scenario, const std::vector<GainMatrix>& gains,
                  const RunOptions& options) {
  const ResolvedScenario resolved = Resolve(scenario);
  if (options.verify) {
    CheckScenarioGains(scenario, gains);
  } else if (gains.size() != scenario.topologies.size()) {
    Fail(ErrorCode::kConfiguration, "one gain matrix per topology required");
  }
  Engine engine(scenario, gains, resolved);
  return engine.Run();
}

double StepLyapunovValue(const TrajectoryLog& log, size_t step, const Matrix& a) {
  const Vector q = log.Positions(step);
  double v = LyapunovValue(q, a);
  if (!log.velocity_weights.empty()) {
    // Speed sits after (x, y, theta) for unicycles and (x, y, theta, phi) for
    // cars.
    const int offset = log.dynamics == DynamicsClass::kUnicycle ? 3 : 4;
    for (int i = 0; i < log.num_agents; ++i) {
      const double speed = log.states[step][i * log.state_width + offset];
      v += 0.5 * log.velocity_weights[i] * speed * speed;
    }
  }
  return v;
}

LyapunovReport LyapunovMonitor(const TrajectoryLog& log,
                               const std::vector<GainMatrix>& gains,
                               double relative_tolerance) {
  LyapunovReport report;
  if (log.dynamics == DynamicsClass::kChain) {
    report.applicable = false;
    return report;
  }
  report.composite = !log.velocity_weights.empty();
  if (log.states.size() < 2) return report;
  std::vector<double> norms;
  for (const GainMatrix& g : gains) norms.push_back(SpectralNorm(g.assembled()));

  const double v0 = StepLyapunovValue(log, 0, gains[log.topology[0]].assembled());
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (size_t k = 0; k + 1 < log.states.size(); ++k) {
    const int topo = log.topology[k];
    const Matrix& a = gains[topo].assembled();
    const double before = StepLyapunovValue(log, k, a);
    const double after = StepLyapunovValue(log, k + 1, a);
    const double q2 = log.Positions(k).squaredNorm();
    // Rounding in evaluating the quadratic form itself.
    const double slack = 16.0 * kEps * (norms[topo] * q2 + std::abs(before));
    const double increment = after - before;
    if (increment > relative_tolerance * std::abs(v0) + slack) {
      ++report.violations;
      if (increment > report.worst_increment) {
        report.worst_increment = increment;
        report.worst_step = static_cast<int>(k);
      }
    }
  }
  return report;
}

}  // namespace formation
