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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "mpx/dynamics.hpp"
#include "mpx/hamiltonians.hpp"
#include "mpx/scenarios.hpp"

using namespace mpx;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

fs::path scratch(const std::string& leaf) {
  fs::path d = fs::temp_directory_path() / "mpx_integration" / leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int cli(const std::string& args) {
  std::string cmd = std::string(MPX_CLI) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write(const fs::path& f, const std::string& text) { std::ofstream(f) << text; }

}  // namespace

TEST_CASE("command-line exit codes") {
  fs::path d = scratch("cli");
  CHECK(cli("list-scenarios") == 0);
  CHECK(cli("defaults ramsey-storage") == 0);
  CHECK(cli("") == 1);
  CHECK(cli("run") == 1);
  CHECK(cli("frobnicate") == 1);

  write(d / "good.yaml", "scenario: rabi-calibration\nsweep:\n  V_mp: [20 mV]\n");
  CHECK(cli("validate --config " + (d / "good.yaml").string()) == 0);
  CHECK(cli("run rabi-calibration -q --config " + (d / "good.yaml").string() + " --out " + (d / "out").string()) == 0);
  CHECK(fs::exists(d / "out" / "manifest.json"));
  CHECK(cli("run ramsey-storage -q --config " + (d / "good.yaml").string()) == 2);

  write(d / "units.yaml", "scenario: ramsey-storage\nparams:\n  chi_s_mp: 4.9\n");
  CHECK(cli("validate --config " + (d / "units.yaml").string()) == 2);
  write(d / "trunc.yaml", "scenario: wigner-snapshot\nsettings:\n  beta: 3\nmodel:\n  storage_dim: 10\n");
  CHECK(cli("validate --config " + (d / "trunc.yaml").string()) == 2);
  CHECK(cli("validate --config " + (d / "missing.yaml").string()) == 2);
  CHECK(cli("validate --config " + (d / "good.yaml").string() + " --override settings.nope=1") == 2);

  // Too short a trace for two Rabi periods: the fit refuses.
  write(d / "short.yaml", "scenario: rabi-calibration\nsettings:\n  t_max: 0.05 us\nsweep:\n  V_mp: [10 mV]\n");
  CHECK(cli("run rabi-calibration -q --config " + (d / "short.yaml").string() + " --out " + (d / "short").string()) == 3);
}

TEST_CASE("runs are deterministic and independent of the worker count") {
  ScenarioConfig c = default_config("single-drive-decoherence");
  c.sweeps = {{"delta_over_chi", {-1.0, 0.5, 2.0}}};
  c.settings["t_max"] = 0.6;
  RunOptions one, two;
  one.workers = 1;
  two.workers = 2;
  ScenarioResult a = run_scenario(c, one), b = run_scenario(c, one), p = run_scenario(c, two);
  REQUIRE(a.tables.size() == b.tables.size());
  for (size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(a.tables[i] == b.tables[i]);
    CHECK(a.tables[i] == p.tables[i]);
  }
}

TEST_CASE("rotating frame matches an explicit carrier with a drive phase") {
  SystemParams p;
  ModelOptions opt;
  opt.storage_dim = 10;
  opt.eliminate_spectator = true;
  PulseTiming tm = probe_timing();
  const double delta = 3.0, Omega = 1.5, eps = 6.0, fc = 30.0, phi = 0.7;
  MasterEquation rot = build_h2_single_tone(p, delta, Omega, eps, tm, opt);

  MasterEquation lab = rot;
  Mat sz = embed(pauli_z(), kMultiplex, rot.space).matrix();
  Mat sm = embed(sigma_minus(), kMultiplex, rot.space).matrix();
  lab.h0 += fc * sz / 2.0;
  Envelope env = tm.probe();
  lab.drives.back() = {"carrier", sm, [=](double t) {
                         return 0.5 * Omega * window(env, t) * std::polar(1.0, phi + kTwoPi * fc * t);
                       }};

  SolverConfig c;
  c.rtol = 1e-11;
  c.atol = 1e-13;
  c.times = linspace(0.0, tm.probe_end(), 43);
  c.observables = {{"sm", sm}, {"sz", sz}};
  Mat rho0 = ground_state(rot.space, thermal_state(p.n_th_s, 10).matrix()).matrix();
  Trajectory a = evolve(rho0, rot, c), b = evolve(rho0, lab, c);
  double worst = 0.0, largest = 0.0;
  for (size_t i = 0; i < c.times.size(); ++i) {
    largest = std::max(largest, std::abs(a["sm"][i]));
    cplx unwound = std::polar(1.0, phi + kTwoPi * fc * c.times[i]) * b["sm"][i];
    worst = std::max(worst, std::abs(unwound - a["sm"][i]));
    worst = std::max(worst, std::abs(b["sz"][i] - a["sz"][i]));
  }
  CHECK(worst < 1e-6);
  CHECK(largest > 1e-2);
}

TEST_CASE("eliminating the idle qubit changes nothing") {
  SystemParams p;
  ModelOptions keep, drop;
  keep.storage_dim = drop.storage_dim = 10;
  drop.eliminate_spectator = true;
  PulseTiming tm = probe_timing();
  MasterEquation full = build_h3_comb(p, 2.0, 8.0, tm, keep);
  MasterEquation red = build_h3_comb(p, 2.0, 8.0, tm, drop);
  CHECK(full.space.dim() == 2 * red.space.dim());
  SolverConfig c;
  c.rtol = 1e-10;
  c.atol = 1e-12;
  c.times = {0.0, tm.probe_end()};
  Mat th = thermal_state(p.n_th_s, 10).matrix();
  Mat rf = evolve(ground_state(full.space, th), full, c).final_state;
  Mat rr = evolve(ground_state(red.space, th), red, c).final_state;
  CHECK((partial_trace(rf, full.space, kStorage) - partial_trace(rr, red.space, kStorage)).norm() < 1e-7);
  CHECK((partial_trace(rf, full.space, kMultiplex) - partial_trace(rr, red.space, kMultiplex)).norm() < 1e-7);
}

TEST_CASE("revival period under a strong comb is 1/chi") {
  ScenarioConfig c = default_config("coherence-revivals");
  c.sweeps = {{"Omega_over_chi", {1.0}}};
  c.model.gamma_1_mp_scale = 0.25;
  ScenarioResult r = run_scenario(c);
  double period = r.table("revivals").column("period").values.front();
  CHECK(period == doctest::Approx(1.0 / c.params.chi_s_mp).epsilon(0.15));
}

TEST_CASE("canonical scenario files validate") {
  for (const auto& e : fs::directory_iterator(MPX_SCENARIO_DIR)) {
    CAPTURE(e.path().string());
    ScenarioConfig c = load_config(e.path().string());
    CHECK_NOTHROW(validate_config(c));
    CHECK(c.scenario + ".yaml" == e.path().filename().string());
  }
}
