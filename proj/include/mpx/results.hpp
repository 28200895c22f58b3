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

#include <filesystem>
#include <string>
#include <vector>

#include "mpx/config.hpp"
#include "mpx/dynamics.hpp"
#include "mpx/wigner.hpp"

namespace mpx {

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless
  std::vector<double> values;
  bool operator==(const Column&) const = default;
};

struct Table {
  std::string name;
  std::vector<Column> columns;

  Column& add(const std::string& name, const std::string& unit, std::vector<double> values = {});
  const Column& column(const std::string& name) const;
  size_t rows() const { return columns.empty() ? 0 : columns.front().values.size(); }
  bool operator==(const Table&) const = default;
};

struct Scalar {
  std::string name;
  double value = 0.0;
  std::string unit;
};

struct NamedMatrix {
  std::string name;
  Mat matrix;
};

struct NamedGrid {
  std::string name;
  WignerGrid grid;
  std::string provenance;
};

struct ScenarioResult {
  std::string scenario;
  ScenarioConfig config;
  std::vector<Table> tables;
  std::vector<Scalar> scalars;
  std::vector<NamedMatrix> matrices;
  std::vector<NamedGrid> grids;
  std::vector<std::string> notes;
  SolverStats stats;
  long runs = 0;
  double wall_time = 0.0;  // s, manifest only

  Table& table(const std::string& name);
  const Table& table(const std::string& name) const;
  void scalar(const std::string& name, double value, const std::string& unit);
  double scalar(const std::string& name) const;
  void absorb(const SolverStats& s);
};

const char* toolkit_version();

// "t[us],X[1]" header then rows; values in shortest round-trip form.
void write_table(const Table& t, const std::filesystem::path& file);
Table read_table(const std::filesystem::path& file);

Table matrix_table(const std::string& name, const Mat& m);
Mat matrix_from_table(const Table& t);

// CSV of (x, p, W) in row-major order plus a JSON sidecar with the grid metadata.
void write_wigner(const WignerGrid& g, const std::filesystem::path& csv, const std::string& provenance = "");
WignerGrid read_wigner(const std::filesystem::path& csv);

// Directory with manifest.json, config.yaml and one CSV per table, matrix and grid.
void write_result(const ScenarioResult& r, const std::filesystem::path& dir);

}  // namespace mpx
