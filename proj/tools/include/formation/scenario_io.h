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

// Scenario documents (JSON, "version": 1). Unknown keys are rejected at every
// level; agent indices in edge lists are 1-based.

#ifndef FORMATION_SCENARIO_IO_H_
#define FORMATION_SCENARIO_IO_H_

#include <string>

#include "json.hpp"

#include "formation/simulation.h"

namespace formation {

inline constexpr int kScenarioVersion = 1;

// Throws Error(kParse) naming the offending field.
Scenario ScenarioFromJson(const nlohmann::json& doc);
nlohmann::json ScenarioToJson(const Scenario& scenario);

Scenario LoadScenario(const std::string& path);
void SaveScenario(const Scenario& scenario, const std::string& path);

// Reads a whole file; throws Error(kIo).
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace formation

#endif  // FORMATION_SCENARIO_IO_H_
