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

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mpx/dynamics.hpp"
#include "mpx/hamiltonians.hpp"
#include "mpx/params.hpp"

namespace mpx {

// Physical dimension of a configurable quantity; each has one canonical unit.
enum class Dim {
  none,       // plain number
  angle,      // rad
  frequency,  // MHz
  carrier,    // GHz
  time,       // us
  rate,       // 1/us
  voltage,    // V
  xi,         // GHz/V
  mu,         // 1/(mV us)
};

const char* canonical_unit(Dim d);
// "4.9 MHz", "(44 ns)^-1", "22.7 1/us", "5 mV". Bare numbers only for Dim::none and Dim::angle.
double parse_quantity(const std::string& text, Dim d);
// Shortest text that parses back to the same double.
std::string format_quantity(double v, Dim d);
std::string format_number(double v);

struct SweepAxis {
  std::string name;
  std::vector<double> values;  // canonical units
  bool operator==(const SweepAxis&) const = default;
};

struct SolverSettings {
  Method method = Method::dopri5;
  double dt = 1e-3;  // us
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;
  bool operator==(const SolverSettings&) const = default;
};

struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;  // reserved
  std::string output;      // relative to the output root unless absolute
  SystemParams params;
  ModelOptions model;
  PulseTiming timing;
  SolverSettings solver;
  std::map<std::string, double> settings;      // canonical units
  std::map<std::string, std::string> options;  // string-valued switches
  std::vector<SweepAxis> sweeps;

  bool operator==(const ScenarioConfig&) const = default;

  double get(const std::string& key) const;
  const std::string& option(const std::string& key) const;
  // Sweep values for key, or the single setting value when it is not swept.
  std::vector<double> axis(const std::string& key) const;
  bool swept(const std::string& key) const;
};

struct SettingSpec {
  std::string key;
  Dim dim = Dim::none;
  double value = 0.0;  // default, canonical units
  double min = -std::numeric_limits<double>::infinity();
};

struct OptionSpec {
  std::string key;
  std::vector<std::string> choices;
  std::string value;
};

// What a scenario accepts; used to fill defaults and reject unknown keys.
struct ScenarioSchema {
  std::string name;
  std::vector<SettingSpec> settings;
  std::vector<OptionSpec> options;
  ScenarioConfig defaults;  // model, timing, solver, sweeps

  const SettingSpec* setting(const std::string& key) const;
  const OptionSpec* option(const std::string& key) const;
};

// Registry lookups, defined next to the scenario runners.
const ScenarioSchema& scenario_schema(const std::string& name);
std::vector<std::string> scenario_names();

// Parses YAML text over the scenario's defaults. `overrides` are dotted key=value pairs applied first.
ScenarioConfig parse_config(const std::string& yaml, const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
std::string serialize_config(const ScenarioConfig& cfg);

SolverConfig solver_config(const SolverSettings& s);

// Throws ConfigError naming the first violated rule.
void validate_config(const ScenarioConfig& cfg);

}  // namespace mpx
