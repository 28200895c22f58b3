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

#include "mpx/results.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mpx/errors.hpp"

namespace mpx {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string header_cell(const Column& c) { return fmt::format("{}[{}]", c.name, c.unit.empty() ? "1" : c.unit); }

double read_double(std::string_view s, const fs::path& file, size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(fmt::format("{}:{}: bad number '{}'", file.string(), line, s));
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  size_t a = 0;
  while (true) {
    size_t b = line.find(',', a);
    out.push_back(line.substr(a, b == std::string_view::npos ? std::string_view::npos : b - a));
    if (b == std::string_view::npos) break;
    a = b + 1;
  }
  return out;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", file.string()));
  out << text;
  if (!out) throw Error(fmt::format("write failed for '{}'", file.string()));
}

json stats_json(const SolverStats& s) {
  return json{{"steps", s.steps},
              {"rejected", s.rejected},
              {"rhs_evals", s.rhs_evals},
              {"max_trace_error", s.max_trace_error},
              {"max_hermiticity_error", s.max_hermiticity_error},
              {"min_snapshot_eigenvalue", s.min_snapshot_eigenvalue}};
}

}  // namespace

const char* toolkit_version() { return "mpxcount 1.0.0"; }

Column& Table::add(const std::string& n, const std::string& unit, std::vector<double> values) {
  if (!columns.empty() && values.size() != rows())
    throw DimensionError(fmt::format("table {}: column {} has {} rows, expected {}", name, n, values.size(), rows()));
  columns.push_back({n, unit, std::move(values)});
  return columns.back();
}

const Column& Table::column(const std::string& n) const {
  for (const auto& c : columns)
    if (c.name == n) return c;
  throw Error(fmt::format("table {}: no column '{}'", name, n));
}

Table& ScenarioResult::table(const std::string& name) {
  for (auto& t : tables)
    if (t.name == name) return t;
  tables.push_back({name, {}});
  return tables.back();
}

const Table& ScenarioResult::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw Error(fmt::format("result has no table '{}'", name));
}

void ScenarioResult::scalar(const std::string& name, double value, const std::string& unit) {
  for (auto& s : scalars) {
    if (s.name == name) {
      s.value = value;
      s.unit = unit;
      return;
    }
  }
  scalars.push_back({name, value, unit});
}

double ScenarioResult::scalar(const std::string& name) const {
  for (const auto& s : scalars)
    if (s.name == name) return s.value;
  throw Error(fmt::format("result has no scalar '{}'", name));
}

void ScenarioResult::absorb(const SolverStats& s) {
  merge(stats, s);
  ++runs;
}

void write_table(const Table& t, const fs::path& file) {
  std::string out;
  for (size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ',';
    out += header_cell(t.columns[j]);
  }
  out += '\n';
  size_t n = t.rows();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < t.columns.size(); ++j) {
      if (j) out += ',';
      out += fmt::format("{}", t.columns[j].values.at(i));
    }
    out += '\n';
  }
  write_text(file, out);
}

Table read_table(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", file.string()));
  Table t;
  t.name = file.stem().string();
  std::string line;
  if (!std::getline(in, line)) throw Error(fmt::format("{}: empty table", file.string()));
  for (auto cell : split(line)) {
    size_t lb = cell.find('[');
    if (lb == std::string_view::npos || cell.back() != ']')
      throw Error(fmt::format("{}: header cell '{}' lacks a unit", file.string(), cell));
    t.columns.push_back({std::string(cell.substr(0, lb)), std::string(cell.substr(lb + 1, cell.size() - lb - 2)), {}});
  }
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw Error(fmt::format("{}:{}: expected {} fields", file.string(), lineno, t.columns.size()));
    for (size_t j = 0; j < cells.size(); ++j) t.columns[j].values.push_back(read_double(cells[j], file, lineno));
  }
  return t;
}

Table matrix_table(const std::string& name, const Mat& m) {
  Table t{name, {}};
  std::vector<double> r, c, re, im;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      r.push_back(i);
      c.push_back(j);
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  t.add("n", "1", r);
  t.add("m", "1", c);
  t.add("re", "1", re);
  t.add("im", "1", im);
  return t;
}

Mat matrix_from_table(const Table& t) {
  const auto& r = t.column("n").values;
  const auto& c = t.column("m").values;
  const auto& re = t.column("re").values;
  const auto& im = t.column("im").values;
  int rows = 0, cols = 0;
  for (size_t k = 0; k < r.size(); ++k) {
    rows = std::max(rows, static_cast<int>(r[k]) + 1);
    cols = std::max(cols, static_cast<int>(c[k]) + 1);
  }
  Mat m = Mat::Zero(rows, cols);
  for (size_t k = 0; k < r.size(); ++k) m(static_cast<int>(r[k]), static_cast<int>(c[k])) = cplx(re[k], im[k]);
  return m;
}

void write_wigner(const WignerGrid& g, const fs::path& csv, const std::string& provenance) {
  Table t{csv.stem().string(), {}};
  std::vector<double> x, p, w;
  for (size_t i = 0; i < g.x.size(); ++i) {
    for (size_t j = 0; j < g.p.size(); ++j) {
      x.push_back(g.x[i]);
      p.push_back(g.p[j]);
      w.push_back(g.W(static_cast<int>(i), static_cast<int>(j)));
    }
  }
  t.add("x", "1", x);
  t.add("p", "1", p);
  t.add("W", "1", w);
  write_table(t, csv);
  json meta = {{"nx", g.x.size()},
               {"np", g.p.size()},
               {"layout", "row-major, x outer, p inner"},
               {"note", g.note},
               {"extent_warning", g.extent_warning},
               {"provenance", provenance}};
  fs::path side = csv;
  side.replace_extension(".json");
  write_text(side, meta.dump(2) + "\n");
}

WignerGrid read_wigner(const fs::path& csv) {
  fs::path side = csv;
  side.replace_extension(".json");
  std::ifstream in(side);
  if (!in) throw Error(fmt::format("cannot read '{}'", side.string()));
  json meta = json::parse(in);
  size_t nx = meta.at("nx").get<size_t>();
  size_t np = meta.at("np").get<size_t>();
  Table t = read_table(csv);
  const auto& x = t.column("x").values;
  const auto& p = t.column("p").values;
  const auto& w = t.column("W").values;
  if (x.size() != nx * np) throw Error(fmt::format("{}: expected {} rows", csv.string(), nx * np));
  WignerGrid g;
  g.note = meta.at("note").get<std::string>();
  g.extent_warning = meta.at("extent_warning").get<bool>();
  g.W.resize(static_cast<int>(nx), static_cast<int>(np));
  for (size_t i = 0; i < nx; ++i) g.x.push_back(x[i * np]);
  for (size_t j = 0; j < np; ++j) g.p.push_back(p[j]);
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < np; ++j) g.W(static_cast<int>(i), static_cast<int>(j)) = w[i * np + j];
  return g;
}

void write_result(const ScenarioResult& r, const fs::path& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["scenario"] = r.scenario;
  manifest["config"] = serialize_config(r.config);
  json prov = {{"version", toolkit_version()}, {"wall_time_s", r.wall_time}, {"runs", r.runs}};
  prov["solver_stats"] = stats_json(r.stats);
  manifest["provenance"] = prov;

  json scalars = json::array();
  for (const auto& s : r.scalars) scalars.push_back({{"name", s.name}, {"value", s.value}, {"unit", s.unit}});
  manifest["scalars"] = scalars;

  json tables = json::array();
  auto entry = [](const Table& t, const std::string& file) {
    json cols = json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    return json{{"name", t.name}, {"file", file}, {"rows", t.rows()}, {"columns", cols}};
  };
  for (const auto& t : r.tables) {
    std::string file = t.name + ".csv";
    write_table(t, dir / file);
    tables.push_back(entry(t, file));
  }
  manifest["tables"] = tables;

  json mats = json::array();
  for (const auto& m : r.matrices) {
    std::string file = "matrix_" + m.name + ".csv";
    Table t = matrix_table(m.name, m.matrix);
    write_table(t, dir / file);
    mats.push_back(entry(t, file));
  }
  manifest["matrices"] = mats;

  json grids = json::array();
  for (const auto& g : r.grids) {
    std::string file = "wigner_" + g.name + ".csv";
    write_wigner(g.grid, dir / file, g.provenance);
    grids.push_back({{"name", g.name}, {"file", file}, {"nx", g.grid.x.size()}, {"np", g.grid.p.size()}});
  }
  manifest["grids"] = grids;
  manifest["notes"] = r.notes;

  write_text(dir / "config.yaml", serialize_config(r.config));
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace mpx
