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

// Bundled scenarios. Units are abstract: lengths in formation units, time in
// seconds.

#ifndef FORMATION_DEMOS_H_
#define FORMATION_DEMOS_H_

#include <optional>
#include <string>
#include <vector>

#include "formation/simulation.h"

namespace formation {

std::vector<std::string> DemoNames();

// Nullopt for an unknown name.
std::optional<Scenario> MakeDemo(const std::string& name);

// Building blocks shared with the tests.
FormationSpec HexagonFormation();
// 3 x 3 grid, unit spacing, agents numbered row by row.
FormationSpec GridFormation();
// Corners and edge midpoints of a side-2 equilateral triangle.
FormationSpec TriangleFormation();
SensingGraph TriangleGraph();
// Four topologies on the 3 x 3 grid used for switching runs.
std::vector<SensingGraph> SwitchingTopologies();
std::vector<ScheduleEntry> SwitchingSchedule();

}  // namespace formation

#endif  // FORMATION_DEMOS_H_
