// Copyright 2026 The mpxcount Authors
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

#include <functional>
#include <string>
#include <vector>

#include "mpx/config.hpp"
#include "mpx/results.hpp"

namespace mpx {

struct RunOptions {
  int workers = 1;
  std::function<void(const std::string&)> log;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();
ScenarioConfig default_config(const std::string& name);

// Validates, runs and returns the result. Wall time is filled in; nothing is written.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

}  // namespace mpx
