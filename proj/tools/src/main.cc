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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "formation/commands.h"
#include "formation/demos.h"

namespace {

// CLI11 fills plain values; these lift them into the optional overrides.
struct RawGlobals {
  std::uint64_t seed = 0;
  double dt = 0.0;
  double t_final = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace formation;
  CLI::App app{"Distributed formation control: gain design and simulation"};
  app.require_subcommand(1);

  GlobalOptions global;
  RawGlobals raw;
  app.add_flag("-q,--quiet", global.quiet, "Print nothing on success");
  auto* seed = app.add_option("--seed", raw.seed, "Override the scenario seed");
  auto* dt = app.add_option("--dt", raw.dt, "Override the integration step")
                 ->check(CLI::PositiveNumber);
  auto* t_final = app.add_option("--t-final", raw.t_final, "Override the horizon")
                      ->check(CLI::PositiveNumber);

  std::string scenario_path, gains_path, out_path, csv_path, svg_path;
  std::string demo_name, demo_dir = ".";

  auto* design = app.add_subcommand("design", "Design gains for a scenario");
  design->add_option("scenario", scenario_path, "Scenario document")->required();
  design->add_option("-o,--out", out_path, "Gains document to write")->required();
  DesignFlags flags;
  double trace_budget = 0.0, tolerance = 0.0;
  int max_iterations = 0;
  std::string algorithm;
  auto* f_trace = design->add_option("--trace", trace_budget, "Trace budget (negative)");
  auto* f_iters = design->add_option("--max-iterations", max_iterations, "Solver iteration cap")
                      ->check(CLI::PositiveNumber);
  auto* f_tol = design->add_option("--tolerance", tolerance, "Primal and dual tolerance")
                    ->check(CLI::PositiveNumber);
  auto* f_alg = design->add_option("--algorithm", algorithm, "admm or projected_subgradient");

  auto* simulate = app.add_subcommand("simulate", "Simulate a scenario with designed gains");
  simulate->add_option("scenario", scenario_path, "Scenario document")->required();
  simulate->add_option("gains", gains_path, "Gains document")->required();
  simulate->add_option("-o,--csv", csv_path, "Trajectory CSV to write")->required();
  auto* svg = simulate->add_option("--svg", svg_path, "Trajectory plot to write");

  auto* verify = app.add_subcommand("verify", "Check gains against a scenario");
  verify->add_option("gains", gains_path, "Gains document")->required();
  verify->add_option("scenario", scenario_path, "Scenario document")->required();

  std::string demo_help = "Run a bundled scenario:";
  for (const std::string& n : DemoNames()) demo_help += " " + n;
  auto* demo = app.add_subcommand("demo", demo_help);
  demo->add_option("name", demo_name, "Demo name")->required();
  demo->add_option("-d,--dir", demo_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*seed) global.seed = raw.seed;
  if (*dt) global.dt = raw.dt;
  if (*t_final) global.t_final = raw.t_final;
  Streams io{std::cout, std::cerr};

  if (*design) {
    if (*f_trace) flags.trace_budget = trace_budget;
    if (*f_iters) flags.max_iterations = max_iterations;
    if (*f_tol) flags.tolerance = tolerance;
    if (*f_alg) flags.algorithm = algorithm;
    return CmdDesign(scenario_path, out_path, flags, global, io);
  }
  if (*simulate) {
    std::optional<std::string> svg_out;
    if (*svg) svg_out = svg_path;
    return CmdSimulate(scenario_path, gains_path, csv_path, svg_out, global, io);
  }
  if (*verify) return CmdVerify(gains_path, scenario_path, global, io);
  return CmdDemo(demo_name, demo_dir, global, io);
}
