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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "mpx/dynamics.hpp"
#include "mpx/errors.hpp"
#include "mpx/hamiltonians.hpp"

using namespace mpx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MasterEquation qubit(double f, double gamma_1, double gamma_z) {
  MasterEquation m;
  m.space = HilbertSpace::single(2, "q");
  m.h0 = f * pauli_z().matrix() / 2.0;
  if (gamma_1 > 0) m.dissipators.push_back({"relax", sigma_minus().matrix(), gamma_1});
  if (gamma_z > 0) m.dissipators.push_back({"dephase", pauli_z().matrix(), gamma_z});
  return m;
}

Mat plus_state() { return Mat::Constant(2, 2, 0.5); }

Mat excited() {
  Mat e = Mat::Zero(2, 2);
  e(1, 1) = 1.0;
  return e;
}

SolverConfig tight(std::vector<double> times) {
  SolverConfig c;
  c.rtol = 1e-10;
  c.atol = 1e-12;
  c.times = std::move(times);
  return c;
}

}  // namespace

TEST_CASE("relaxation follows exp(-Gamma t)") {
  MasterEquation m = qubit(0.0, 2.0, 0.0);
  SolverConfig c = tight(linspace(0.0, 2.0, 21));
  c.observables = {{"pe", excited()}};
  Trajectory tr = evolve(excited(), m, c);
  auto pe = tr.real("pe");
  for (size_t i = 0; i < pe.size(); ++i) CHECK(pe[i] == doctest::Approx(std::exp(-2.0 * tr.times[i])).epsilon(1e-8));
}

TEST_CASE("sigma_z dephasing damps the coherence at twice the rate") {
  MasterEquation m = qubit(0.0, 0.0, 0.7);
  SolverConfig c = tight(linspace(0.0, 1.0, 11));
  c.observables = {{"x", pauli_x().matrix()}};
  Trajectory tr = evolve(plus_state(), m, c);
  auto x = tr.real("x");
  for (size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(std::exp(-1.4 * tr.times[i])).epsilon(1e-8));
}

TEST_CASE("Larmor precession at f MHz") {
  MasterEquation m = qubit(3.0, 0.0, 0.0);
  SolverConfig c = tight(linspace(0.0, 1.0, 41));
  c.observables = {{"x", pauli_x().matrix()}};
  Trajectory tr = evolve(plus_state(), m, c);
  auto x = tr.real("x");
  for (size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(std::cos(kTwoPi * 3.0 * tr.times[i])).epsilon(1e-7));
  CHECK(tr.stats.max_trace_error < 1e-12);
  CHECK(tr.stats.max_hermiticity_error < 1e-12);
}

TEST_CASE("resonant drive term gives Rabi oscillation") {
  // coeff * sigma_- + h.c. = (Omega/2) sigma_x for coeff = Omega/2.
  MasterEquation m = qubit(0.0, 0.0, 0.0);
  const double Omega = 2.0;
  m.drives.push_back({"rabi", sigma_minus().matrix(), [Omega](double) { return cplx(0.5 * Omega); }});
  SolverConfig c = tight(linspace(0.0, 1.0, 21));
  c.observables = {{"pe", excited()}};
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 1.0;
  Trajectory tr = evolve(g, m, c);
  auto pe = tr.real("pe");
  for (size_t i = 0; i < pe.size(); ++i) {
    double s = std::sin(0.5 * kTwoPi * Omega * tr.times[i]);
    CHECK(pe[i] == doctest::Approx(s * s).epsilon(1e-7));
  }
}

TEST_CASE("RK4 converges at fourth order") {
  MasterEquation m = qubit(1.0, 1.5, 0.3);
  m.drives.push_back({"drive", sigma_minus().matrix(), [](double t) { return cplx(0.8 * std::cos(5.0 * t), 0.2); }});
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 1.0;
  Mat ref = evolve(g, m, tight({0.0, 1.0})).final_state;
  std::vector<double> err;
  for (double dt : {0.02, 0.01, 0.005}) {
    SolverConfig c;
    c.method = Method::rk4;
    c.dt = dt;
    c.times = {0.0, 1.0};
    err.push_back((evolve(g, m, c).final_state - ref).norm());
  }
  CHECK(std::log2(err[0] / err[1]) > 3.9);
  CHECK(std::log2(err[1] / err[2]) > 3.9);
}

TEST_CASE("long undriven steps stay Hermitian") {
  // Large diagonal energies with slow populations let the step grow far past 1/energy.
  SystemParams p;
  ModelOptions opt;
  opt.storage_dim = 14;
  opt.thermal = false;
  MasterEquation m = build_h4_mid(p, 0.0, 0.0, 5.0, opt, WindowShape::square);
  SolverConfig c;
  c.times = linspace(0.0, 5.0, 101);
  Trajectory tr = evolve(ground_state(m.space, coherent_state(1.55, 14).matrix()), m, c);
  CHECK(tr.stats.max_hermiticity_error < 1e-12);
  CHECK(tr.stats.rejected == 0);
}

TEST_CASE("snapshots and solver validation") {
  MasterEquation m = qubit(0.0, 1.0, 0.0);
  SolverConfig c = tight({0.0, 1.0});
  c.snapshot_times = {0.5, 1.0};
  Trajectory tr = evolve(excited(), m, c);
  REQUIRE(tr.snapshots.size() == 2);
  CHECK(tr.snapshots[0](1, 1).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-8));
  c.snapshot_times = {2.0};
  CHECK_THROWS_AS(evolve(excited(), m, c), ConfigError);
  SolverConfig bad = tight({1.0, 0.0});
  CHECK_THROWS_AS(evolve(excited(), m, bad), ConfigError);
  m.dissipators[0].rate = -1.0;
  CHECK_THROWS_AS(evolve(excited(), m, tight({0.0, 1.0})), ConfigError);
  CHECK_THROWS_AS(evolve(Mat::Identity(3, 3) / 3.0, qubit(0, 1, 0), tight({0.0, 1.0})), DimensionError);
}

TEST_CASE("full Hamiltonian dispersive shifts") {
  SystemParams p = table_params();
  Operator h = build_full_hamiltonian(p, 4);
  const HilbertSpace& sp = h.space();
  // Index of |n_s, n_yn, n_mp> in Kronecker order.
  auto idx = [&](int s, int y, int q) { return (s * 2 + y) * 2 + q; };
  auto e = [&](int s, int y, int q) { return h.matrix()(idx(s, y, q), idx(s, y, q)).real(); };
  REQUIRE(sp.dim() == 16);
  for (int n = 1; n < 4; ++n) {
    double mp_shift = (e(n, 0, 1) - e(n, 0, 0)) - (e(n - 1, 0, 1) - e(n - 1, 0, 0));
    double yn_shift = (e(n, 1, 0) - e(n, 0, 0)) - (e(n - 1, 1, 0) - e(n - 1, 0, 0));
    CHECK(mp_shift == doctest::Approx(-4.9));
    CHECK(yn_shift == doctest::Approx(-1.4));
  }
  CHECK(e(0, 0, 1) - e(0, 0, 0) == doctest::Approx(1e3 * p.f_mp));
}

TEST_CASE("yes-no pi pulse inverts the qubit for an empty storage") {
  SystemParams p;
  ModelOptions opt;
  opt.storage_dim = 6;
  opt.eliminate_spectator = true;
  PulseTiming tm = yes_no_timing();
  MasterEquation m = build_h1_yesno(p, 0.0, 0.0, tm, opt);
  SolverConfig c;
  c.rtol = 1e-8;
  c.times = {0.0, tm.probe_end()};
  c.observables = {{"pe", embed(Operator(HilbertSpace::single(2), excited()), kYesNo, m.space).matrix()}};
  Trajectory tr = evolve(ground_state(m.space, fock_state(0, 6).matrix()), m, c);
  CHECK(tr.real("pe").back() > 0.95);
}

TEST_CASE("single-tone probe without drive leaves sigma_y at zero") {
  SystemParams p;
  ModelOptions opt;
  opt.storage_dim = 8;
  opt.eliminate_spectator = true;
  PulseTiming tm = probe_timing();
  MasterEquation m = build_h2_single_tone(p, 0.0, 0.0, 0.01, tm, opt);
  SolverConfig c;
  c.times = linspace(0.0, tm.probe_end(), 11);
  c.observables = {{"sy", embed(pauli_y(), kMultiplex, m.space).matrix()}};
  Trajectory tr = evolve(ground_state(m.space, thermal_state(p.n_th_s, 8).matrix()), m, c);
  for (double v : tr.real("sy")) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("one-tone comb equals the single-tone model at zero detuning") {
  SystemParams p;
  ModelOptions opt;
  opt.storage_dim = 8;
  opt.eliminate_spectator = true;
  opt.comb_tones = 1;
  PulseTiming tm = probe_timing();
  const double Omega = 1.2;
  MasterEquation h2 = build_h2_single_tone(p, 0.0, Omega, 0.01, tm, opt);
  MasterEquation h3 = build_h3_comb(p, Omega, 0.01, tm, opt);
  SolverConfig c;
  c.rtol = 1e-9;
  c.atol = 1e-11;
  c.times = {0.0, tm.probe_end()};
  Mat rho0 = ground_state(h2.space, thermal_state(p.n_th_s, 8).matrix()).matrix();
  CHECK((evolve(rho0, h2, c).final_state - evolve(rho0, h3, c).final_state).norm() < 1e-8);
}
