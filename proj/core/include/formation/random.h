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

#ifndef FORMATION_RANDOM_H_
#define FORMATION_RANDOM_H_

#include <cstdint>
#include <random>

namespace formation {

// std::mt19937_64 (bit-exact by the standard) with a fixed 53-bit mapping to
// doubles, so seeded draws agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // [0, 1)
  double Uniform();
  // [lo, hi)
  double Uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace formation

#endif  // FORMATION_RANDOM_H_
