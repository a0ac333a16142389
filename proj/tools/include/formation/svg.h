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

#ifndef FORMATION_SVG_H_
#define FORMATION_SVG_H_

#include <string>

#include "formation/formation.h"
#include "formation/simulation.h"

namespace formation {

// Static plot: one polyline per agent, a marker at each start, and the edges
// of final_graph drawn between final positions.
std::string TrajectorySvg(const TrajectoryLog& log, const SensingGraph& final_graph,
                          int max_points_per_agent = 2000);

}  // namespace formation

#endif  // FORMATION_SVG_H_
