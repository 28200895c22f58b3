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

#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>
#include <json.hpp>

#include "mpx/errors.hpp"
#include "mpx/results.hpp"
#include "mpx/scenarios.hpp"

using namespace mpx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& leaf) {
  fs::path d = fs::temp_directory_path() / "mpx_unit" / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("tables round-trip bit for bit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Table t{"demo", {}};
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(u(rng) * 1e-9);
    b.push_back(u(rng));
  }
  t.add("t", "us", a);
  t.add("X", "1", b);
  fs::path f = scratch("table") / "demo.csv";
  write_table(t, f);
  CHECK(read_table(f) == t);
  std::ifstream in(f);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t[us],X[1]");
  CHECK_THROWS_AS(t.add("short", "1", {1.0}), DimensionError);
}

TEST_CASE("matrices round-trip") {
  Mat m = coherent_state(cplx(0.3, 0.7), 6).matrix();
  CHECK(matrix_from_table(matrix_table("rho", m)) == m);
}

TEST_CASE("Wigner grids round-trip with metadata") {
  WignerGrid g = wigner(thermal_state(0.2, 10), GridSpec{2.0, 3.0, 21, 31});
  g.extent_warning = true;
  fs::path f = scratch("grid") / "w.csv";
  write_wigner(g, f, "unit test");
  WignerGrid h = read_wigner(f);
  CHECK(h.x == g.x);
  CHECK(h.p == g.p);
  CHECK(h.W == g.W);
  CHECK(h.note == g.note);
  CHECK(h.extent_warning);
}

TEST_CASE("result directory layout") {
  ScenarioConfig c = default_config("rabi-calibration");
  c.sweeps.front().values = {0.02};
  ScenarioResult r = run_scenario(c);
  fs::path d = scratch("result");
  write_result(r, d);
  CHECK(fs::exists(d / "config.yaml"));
  CHECK(fs::exists(d / "manifest.json"));
  std::ifstream in(d / "manifest.json");
  auto j = nlohmann::json::parse(in);
  CHECK(j["scenario"] == "rabi-calibration");
  CHECK(j["provenance"]["version"] == toolkit_version());
  for (const auto& t : j["tables"]) CHECK(fs::exists(d / t["file"].get<std::string>()));
  CHECK(load_config((d / "config.yaml").string()) == c);
}
