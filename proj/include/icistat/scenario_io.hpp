// Copyright 2026 The icistat Authors
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

#pragma once

#include <istream>
#include <string>

#include "icistat/scenario.hpp"

namespace icistat {

// Flat "key = value" text, one field per line, '#' starts a comment.
// Every field is required: cell_radius, gamma, d_ref_multiplier, sigma_db,
// reuse, seed. Floats are written with 17 significant digits.

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& source = "<input>");
ScenarioConfig load_scenario_config(const std::string& path);
std::string format_scenario_config(const ScenarioConfig& config);
void save_scenario_config(const std::string& path, const ScenarioConfig& config);

/// Canonical one-line rendering, used for cache keys.
std::string canonical_key(const ScenarioConfig& config);

}  // namespace icistat
