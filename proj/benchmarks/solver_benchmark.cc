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

// Scaling of gain design and verification with the number of agents, on
// random formations sensed through trilateration graphs.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "formation/formation.h"
#include "formation/gain_solver.h"
#include "formation/random.h"

namespace formation {
namespace {

Vector RandomFormation(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vector c(2 * n);
  for (int k = 0; k < 2 * n; ++k) c[k] = rng.Uniform(-5, 5);
  return c;
}

// Triangle on the first three agents, then each later agent links to its
// k nearest predecessors.
SensingGraph Trilateration(const Vector& c, int k) {
  const int n = static_cast<int>(c.size() / 2);
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  for (int i = 3; i < n; ++i) {
    std::vector<int> prev(i);
    std::iota(prev.begin(), prev.end(), 0);
    auto dist = [&](int j) { return (c.segment<2>(2 * i) - c.segment<2>(2 * j)).norm(); };
    std::sort(prev.begin(), prev.end(), [&](int a, int b) { return dist(a) < dist(b); });
    for (int m = 0; m < std::min(k, i); ++m) edges.push_back({prev[m], i});
  }
  return SensingGraph(n, edges);
}

void BM_DesignTrilateration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Vector c = RandomFormation(n, 7);
  const FormationSpec spec(c);
  const SensingGraph graph = Trilateration(c, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DesignGains(graph, spec, SolverOptions{}));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DesignTrilateration)
    ->RangeMultiplier(2)
    ->Range(8, 64)
    ->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_DesignComplete(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FormationSpec spec(RandomFormation(n, 11));
  const SensingGraph graph = SensingGraph::Complete(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DesignGains(graph, spec, SolverOptions{}));
  }
}
BENCHMARK(BM_DesignComplete)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

void BM_VerifyGains(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Vector c = RandomFormation(n, 7);
  const FormationSpec spec(c);
  const GainMatrix gains = DesignGains(Trilateration(c, 4), spec, SolverOptions{});
  const KernelBasis basis = BuildKernelBasis(spec);
  for (auto _ : state) benchmark::DoNotOptimize(VerifyGains(gains, basis));
}
BENCHMARK(BM_VerifyGains)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace formation

BENCHMARK_MAIN();
