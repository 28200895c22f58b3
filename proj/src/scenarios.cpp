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

#include "mpx/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mpx/analysis.hpp"
#include "mpx/errors.hpp"
#include "mpx/parallel.hpp"
#include "mpx/readout.hpp"
#include "mpx/wigner.hpp"

namespace mpx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Runner = std::function<void(const ScenarioConfig&, const RunOptions&, ScenarioResult&)>;

struct Entry {
  ScenarioSchema schema;
  std::string description;
  Runner run;
};

void say(const RunOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

Mat on(const Operator& op, const char* label, const HilbertSpace& space) { return embed(op, label, space).matrix(); }

Mat excited(const char* label, const HilbertSpace& space) {
  Mat e = Mat::Zero(2, 2);
  e(1, 1) = 1.0;
  return on(Operator(HilbertSpace::single(2, label), e), label, space);
}

Mat initial_storage(const ScenarioConfig& c) {
  if (c.model.thermal) return thermal_state(c.params.n_th_s, c.model.storage_dim).matrix();
  return fock_state(0, c.model.storage_dim).matrix();
}

double eps_from_volts(const ScenarioConfig& c, double V) { return c.params.calibration.mu * 1e3 * V; }

double displacement_gain(const ScenarioConfig& c) {
  double g = window_area(c.timing.displacement());
  return c.model.linear_displacement ? 2.0 * kPi * g : g;
}

std::vector<double> sample_grid(double t0, double t1, double step) {
  int n = std::max(2, static_cast<int>(std::llround((t1 - t0) / step)) + 1);
  return linspace(t0, t1, n);
}

SolverConfig solver_for(const ScenarioConfig& c, std::vector<double> times) {
  SolverConfig sc = solver_config(c.solver);
  if (times.empty() || times.front() != 0.0) times.insert(times.begin(), 0.0);
  sc.times = std::move(times);
  return sc;
}

double trapezoid_mean(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (size_t i = 1; i < t.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return s / (t.back() - t.front());
}

std::vector<double> real_part(const std::vector<cplx>& v, size_t from = 0) {
  std::vector<double> out;
  for (size_t i = from; i < v.size(); ++i) out.push_back(v[i].real());
  return out;
}

WindowShape shape_of(const ScenarioConfig& c) {
  return c.option("shape") == "square" ? WindowShape::square : WindowShape::gaussian;
}

std::vector<double> durations_of(const ScenarioConfig& c) {
  return linspace(c.get("t_min"), c.get("t_max"), static_cast<int>(c.get("n_durations")));
}

ScenarioConfig base_defaults(const PulseTiming& timing, int storage_dim, bool eliminate, double rtol, double atol) {
  ScenarioConfig d;
  d.timing = timing;
  d.model.storage_dim = storage_dim;
  d.model.eliminate_spectator = eliminate;
  d.solver.rtol = rtol;
  d.solver.atol = atol;
  return d;
}

// photocount-yesno

void run_yesno(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> V = c.axis("V_max_s"), D = c.axis("delta_f_yn");
  const size_t n = V.size() * D.size();
  std::vector<double> pe(n), nbar(n), eps(n);
  std::vector<SolverStats> st(n);
  Mat rho_s = initial_storage(c);
  say(o, fmt::format("photocount-yesno: {} points", n));
  parallel_for(static_cast<int>(n), o.workers, [&](int idx) {
    size_t i = idx / D.size(), j = idx % D.size();
    eps[idx] = eps_from_volts(c, V[i]);
    MasterEquation meq = build_h1_yesno(c.params, D[j], eps[idx], c.timing, c.model, true);
    SolverConfig sc = solver_for(c, {c.timing.probe_start(), c.timing.probe_end()});
    sc.observables = {{"n_s", on(number(c.model.storage_dim), kStorage, meq.space)},
                      {"P_e", excited(kYesNo, meq.space)}};
    Trajectory tr = evolve(ground_state(meq.space, rho_s), meq, sc);
    nbar[idx] = tr["n_s"][1].real();
    pe[idx] = tr["P_e"].back().real();
    st[idx] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);
  Table& t = r.table("pe_map");
  std::vector<double> vv, dd;
  for (size_t idx = 0; idx < n; ++idx) {
    vv.push_back(V[idx / D.size()]);
    dd.push_back(D[idx % D.size()]);
  }
  t.add("V_max_s", "V", vv);
  t.add("delta_f_yn", "MHz", dd);
  t.add("eps_max", "1/us", eps);
  t.add("nbar", "1", nbar);
  t.add("P_e", "1", pe);
}

// photocount-single-tone

void run_single_tone(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> V = c.axis("V_max_s"), D = c.axis("delta_f_mp");
  const double Omega = c.get("Omega_over_chi") * c.params.chi_s_mp;
  if (!(Omega > 0)) throw ConfigError("settings.Omega_over_chi: must be > 0 for an emission measurement");
  const size_t n = V.size() * D.size();
  std::vector<double> em(n), nbar(n);
  std::vector<SolverStats> st(n);
  Mat rho_s = initial_storage(c);
  std::vector<double> grid = sample_grid(c.timing.probe_start(), c.timing.probe_end(), c.get("sample_step"));
  say(o, fmt::format("photocount-single-tone: {} points", n));
  parallel_for(static_cast<int>(n), o.workers, [&](int idx) {
    size_t i = idx / D.size(), j = idx % D.size();
    MasterEquation meq = build_h2_single_tone(c.params, D[j], Omega, eps_from_volts(c, V[i]), c.timing, c.model);
    SolverConfig sc = solver_for(c, grid);
    sc.observables = {{"n_s", on(number(c.model.storage_dim), kStorage, meq.space)},
                      {"sigma_y", on(pauli_y(), kMultiplex, meq.space)}};
    Trajectory tr = evolve(ground_state(meq.space, rho_s), meq, sc);
    nbar[idx] = tr["n_s"][1].real();
    std::vector<double> sy = real_part(tr["sigma_y"], 1);
    std::vector<double> coeff = emission_coefficient(sy, c.params.Gamma_1_mp, Omega);
    em[idx] = c.get("amplitude") * trapezoid_mean(grid, coeff);
    st[idx] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);
  Table& t = r.table("emission_map");
  std::vector<double> vv, dd;
  for (size_t idx = 0; idx < n; ++idx) {
    vv.push_back(V[idx / D.size()]);
    dd.push_back(D[idx % D.size()]);
  }
  t.add("V_max_s", "V", vv);
  t.add("delta_f_mp", "MHz", dd);
  t.add("nbar", "1", nbar);
  t.add("emission", "1", em);
}

// photocount-multiplexed

void run_multiplexed(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> N = c.axis("nbar");
  const double Omega = c.get("Omega_over_chi") * c.params.chi_s_mp;
  const int channels = static_cast<int>(c.get("channels"));
  if (channels < 1) throw ConfigError("settings.channels: must be >= 1");
  const double gain = displacement_gain(c);
  const double chi = c.params.chi_s_mp;
  // Whole beats of the tone spacing, centred on the probe, keep the channels orthogonal.
  double t0 = c.timing.probe_start(), t1 = c.timing.probe_end();
  int beats = static_cast<int>(std::floor(c.timing.probe_duration * chi + 1e-9));
  if (c.option("window") == "beats" && beats >= 1) {
    double mid = 0.5 * (t0 + t1), half = 0.5 * beats / chi;
    t0 = mid - half;
    t1 = mid + half;
  }
  std::vector<double> grid = sample_grid(t0, t1, c.get("sample_step"));
  std::vector<double> times = grid;
  if (t0 > c.timing.probe_start()) times.insert(times.begin(), c.timing.probe_start());
  const size_t skip = times.size() - grid.size() + (times.front() == 0.0 ? 0 : 1);
  const size_t n = N.size();
  std::vector<double> measured(n), eps(n);
  std::vector<std::vector<double>> sy(n);
  std::vector<SolverStats> st(n);
  Mat rho_s = initial_storage(c);
  say(o, fmt::format("photocount-multiplexed: {} points", n));
  parallel_for(static_cast<int>(n), o.workers, [&](int i) {
    eps[i] = std::sqrt(N[i]) / gain;
    MasterEquation meq = build_h3_comb(c.params, Omega, eps[i], c.timing, c.model);
    SolverConfig sc = solver_for(c, times);
    sc.observables = {{"n_s", on(number(c.model.storage_dim), kStorage, meq.space)},
                      {"sigma_y", on(pauli_y(), kMultiplex, meq.space)}};
    Trajectory tr = evolve(ground_state(meq.space, rho_s), meq, sc);
    measured[i] = tr["n_s"][1].real();
    sy[i] = real_part(tr["sigma_y"], skip);
    st[i] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);

  Table& t = r.table("channels");
  t.add("nbar_target", "1", N);
  t.add("nbar", "1", measured);
  t.add("eps_max", "1/us", eps);
  std::vector<std::vector<double>> val(channels, std::vector<double>(n)), quad(channels, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    auto ch = demultiplex_all(grid, sy[i], channels, chi, grid.front(), grid.back());
    for (int k = 0; k < channels; ++k) {
      val[k][i] = ch[k].value;
      quad[k][i] = ch[k].quadrature;
    }
  }
  for (int k = 0; k < channels; ++k) t.add(fmt::format("r{}", k), "1", val[k]);
  for (int k = 0; k < channels; ++k) t.add(fmt::format("q{}", k), "1", quad[k]);

  Table& tr = r.table("sigma_y");
  tr.add("t", "us", grid);
  for (size_t i = 0; i < n; ++i) tr.add(fmt::format("sigma_y_{}", i), "1", sy[i]);
}

// calibrate-displacement

void run_calibrate(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> E = c.axis("eps_max");
  const size_t n = E.size();
  std::vector<double> nbar(n), root(n);
  std::vector<SolverStats> st(n);
  Mat rho_s = initial_storage(c);
  const double n_th = c.model.thermal ? c.params.n_th_s : 0.0;
  say(o, fmt::format("calibrate-displacement: {} points", n));
  parallel_for(static_cast<int>(n), o.workers, [&](int i) {
    MasterEquation meq = build_h1_yesno(c.params, 0.0, E[i], c.timing, c.model, false);
    SolverConfig sc = solver_for(c, {c.timing.displacement().end()});
    sc.observables = {{"n_s", on(number(c.model.storage_dim), kStorage, meq.space)}};
    Trajectory tr = evolve(ground_state(meq.space, rho_s), meq, sc);
    nbar[i] = tr["n_s"].back().real();
    root[i] = std::sqrt(std::max(0.0, nbar[i] - n_th));
    st[i] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);
  Table& t = r.table("photon_number");
  t.add("eps_max", "1/us", E);
  t.add("nbar", "1", nbar);
  t.add("sqrt_n_displaced", "1", root);

  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
      sx += E[i];
      sy += root[i];
      sxx += E[i] * E[i];
      sxy += E[i] * root[i];
    }
    double den = n * sxx - sx * sx;
    if (den == 0) throw ConfigError("sweep.eps_max: needs two distinct values for a slope");
    double slope = (n * sxy - sx * sy) / den;
    double icpt = (sy - slope * sx) / n;
    r.scalar("slope", slope, "us");
    r.scalar("intercept", icpt, "1");
    r.scalar("photons_per_volt", slope * c.params.calibration.mu * 1e3, "1/V");
  }
}

// ramsey-storage and mid-sweep

MidSweepConfig mid_config(const ScenarioConfig& c, const RunOptions& o) {
  MidSweepConfig m;
  m.params = c.params;
  m.beta = c.get("beta");
  m.delta_f_s0 = c.get("delta_f_s0");
  m.durations = durations_of(c);
  m.model = c.model;
  m.shape = shape_of(c);
  m.solver = solver_config(c.solver);
  m.workers = o.workers;
  return m;
}

void run_ramsey(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  MidSweepConfig m = mid_config(c, o);
  std::vector<double> x, p;
  SolverStats st;
  say(o, "ramsey-storage: free evolution");
  mid_quadratures(m, 0.0, x, p, &st);
  r.absorb(st);
  RamseyFit f = fit_ramsey(x, p, m.durations);
  Table& t = r.table("quadratures");
  t.add("t", "us", m.durations);
  t.add("X", "1", x);
  t.add("P", "1", p);
  t.add("rotating", "1", rotating_frame_quadrature(x, p, m.durations, f.delta_f_s));
  r.scalar("A", f.A, "1");
  r.scalar("delta_f_s", f.delta_f_s, "MHz");
  r.scalar("phi", f.phi, "rad");
  r.scalar("Gamma_d_s", f.Gamma_d_s, "1/us");
  r.scalar("residual", f.residual, "1");
}

void run_mid(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  MidSweepConfig m = mid_config(c, o);
  m.two_tone_threshold = c.get("two_tone_threshold");
  std::vector<double> ratio = c.axis("Omega_over_chi"), omegas;
  for (double q : ratio) omegas.push_back(q * c.params.chi_s_mp);
  say(o, fmt::format("mid-sweep: {} drive strengths x {} durations", omegas.size(), m.durations.size()));
  SolverStats st;
  std::vector<DephasingPoint> pts = dephasing_sweep(m, omegas, &st);
  r.absorb(st);

  Table& t = r.table("curve");
  std::vector<double> g, df, res, two, nu, zeta, ok;
  for (const auto& pt : pts) {
    g.push_back(pt.Gamma_d_s);
    df.push_back(pt.delta_f_s);
    res.push_back(pt.residual);
    two.push_back(pt.model == "two-tone" ? 1.0 : 0.0);
    nu.push_back(pt.model == "two-tone" ? pt.two_tone.nu : std::nan(""));
    zeta.push_back(pt.model == "two-tone" ? pt.two_tone.zeta : std::nan(""));
    ok.push_back(pt.error.empty() ? 1.0 : 0.0);
    if (!pt.error.empty()) r.notes.push_back(fmt::format("Omega = {} MHz: {}", pt.Omega, pt.error));
  }
  t.add("Omega", "MHz", omegas);
  t.add("Omega_over_chi", "1", ratio);
  t.add("Gamma_d_s", "1/us", g);
  t.add("delta_f_s", "MHz", df);
  t.add("residual", "1", res);
  t.add("two_tone", "1", two);
  t.add("nu", "MHz", nu);
  t.add("zeta", "1", zeta);
  t.add("fit_ok", "1", ok);

  Table& q = r.table("quadratures");
  q.add("t", "us", m.durations);
  for (size_t i = 0; i < pts.size(); ++i) {
    q.add(fmt::format("X_{}", i), "1", pts[i].x);
    q.add(fmt::format("P_{}", i), "1", pts[i].p);
  }

  int imax = interior_maximum(g);
  r.scalar("Gamma_natural", c.params.Gamma_2_s, "1/us");
  if (imax >= 0) {
    r.scalar("peak_Omega_over_chi", refine_extremum(ratio, g, imax), "1");
    r.scalar("peak_ratio", g[imax] / c.params.Gamma_2_s, "1");
  } else {
    r.notes.push_back("Gamma_d_s has no interior maximum on this grid");
  }
}

// single-drive-decoherence

void run_single_drive(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> ratio = c.axis("delta_over_chi");
  const double chi = c.params.chi_s_mp;
  const double Omega = c.get("Omega_over_chi") * chi;
  const int n_max = static_cast<int>(c.get("n_max"));
  const double t_max = c.get("t_max"), t_skip = c.get("t_skip"), floor = c.get("floor");
  const bool via_wigner = c.get("via_wigner") != 0.0;
  const DecoherenceForm form = c.option("form") == "printed" ? DecoherenceForm::printed : DecoherenceForm::split;
  const bool tail = c.option("fit_range") == "tail";
  std::vector<double> grid = sample_grid(0.0, t_max, c.get("sample_step"));
  Mat coh = coherent_state(c.get("beta"), c.model.storage_dim).matrix();

  const size_t nd = ratio.size();
  std::vector<std::vector<Mat>> states(nd);
  std::vector<SolverStats> st(nd);
  say(o, fmt::format("single-drive-decoherence: {} detunings", nd));
  parallel_for(static_cast<int>(nd), o.workers, [&](int i) {
    MasterEquation meq = build_single_drive(c.params, Omega, ratio[i] * chi, 0.0, t_max, c.model);
    SolverConfig sc = solver_for(c, grid);
    sc.snapshot_times = grid;
    Trajectory tr = evolve(ground_state(meq.space, coh), meq, sc);
    for (const auto& s : tr.snapshots) {
      Mat rs = partial_trace(s, meq.space, kStorage);
      if (via_wigner) rs = reconstruct_rho(wigner(rs), c.model.storage_dim - 1).rho;
      states[i].push_back(rs);
    }
    st[i] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);

  const double gphi = c.model.storage_dephasing ? c.params.Gamma_phi_s() : 0.0;
  const double g1 = c.model.gamma_1_mp_scale * c.params.Gamma_1_mp;
  std::vector<double> cd, cn, cm, ct, cv;
  std::vector<double> rd, rn, rm, rsim, rth, rshift, rerr, rpts;
  for (size_t i = 0; i < nd; ++i) {
    for (int n = 0; n <= n_max; ++n) {
      for (int m = n + 1; m <= n_max; ++m) {
        std::vector<double> tt, yy;
        for (size_t k = 0; k < grid.size(); ++k) {
          double v = normalized_coherence(states[i][k], n, m);
          cd.push_back(ratio[i] * chi);
          cn.push_back(n);
          cm.push_back(m);
          ct.push_back(grid[k]);
          cv.push_back(v);
          if (grid[k] >= t_skip && std::isfinite(v) && v >= floor) {
            tt.push_back(grid[k]);
            yy.push_back(v);
          }
        }
        DecoherenceRate th = decoherence_rate_theory(n, m, ratio[i] * chi, Omega, g1, chi, form);
        double theory = th.rate + gphi * (n - m) * (n - m);
        // The theory gives the slowest mode; faster modes only shape the start.
        if (tail && tt.size() >= 6) {
          size_t drop = tt.size() / 2;
          tt.erase(tt.begin(), tt.begin() + drop);
          yy.erase(yy.begin(), yy.begin() + drop);
        }
        double sim = std::nan("");
        if (tt.size() >= 3) {
          try {
            sim = fit_exponential(tt, yy).rate;
          } catch (const FitError& e) {
            r.notes.push_back(fmt::format("delta = {} MHz, ({}, {}): {}", ratio[i] * chi, n, m, e.what()));
          }
        }
        rd.push_back(ratio[i] * chi);
        rn.push_back(n);
        rm.push_back(m);
        rsim.push_back(sim);
        rth.push_back(theory);
        rshift.push_back(th.shift);
        rerr.push_back(std::abs(sim - theory) / theory);
        rpts.push_back(static_cast<double>(tt.size()));
      }
    }
  }
  Table& rates = r.table("rates");
  rates.add("delta", "MHz", rd);
  rates.add("n", "1", rn);
  rates.add("m", "1", rm);
  rates.add("rate_sim", "1/us", rsim);
  rates.add("rate_theory", "1/us", rth);
  rates.add("shift_theory", "MHz", rshift);
  rates.add("rel_error", "1", rerr);
  rates.add("points", "1", rpts);
  Table& coh_t = r.table("coherence");
  coh_t.add("delta", "MHz", cd);
  coh_t.add("n", "1", cn);
  coh_t.add("m", "1", cm);
  coh_t.add("t", "us", ct);
  coh_t.add("normalized", "1", cv);
  double worst = 0.0;
  for (double e : rerr)
    if (std::isfinite(e)) worst = std::max(worst, e);
  r.scalar("max_rel_error", worst, "1");
}

// coherence-revivals and qnd-check share square-window H4 time series.

std::vector<std::vector<Mat>> h4_series(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r,
                                        const std::vector<double>& ratio, const std::vector<double>& grid) {
  Mat coh = coherent_state(c.get("beta"), c.model.storage_dim).matrix();
  std::vector<double> durations(grid.begin() + 1, grid.end());
  std::vector<std::vector<Mat>> out(ratio.size());
  for (size_t i = 0; i < ratio.size(); ++i) {
    SolverStats st;
    out[i] = mid_storage_states(c.params, ratio[i] * c.params.chi_s_mp, c.get("delta_f_s0"), coh, durations,
                                c.model, shape_of(c), solver_config(c.solver), o.workers, &st);
    out[i].insert(out[i].begin(), coh);
    r.absorb(st);
  }
  return out;
}

void run_revivals(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> ratio = c.axis("Omega_over_chi");
  std::vector<double> grid = sample_grid(0.0, c.get("t_max"), c.get("sample_step"));
  say(o, fmt::format("coherence-revivals: {} drive strengths", ratio.size()));
  auto states = h4_series(c, o, r, ratio, grid);
  const double gphi = c.model.storage_dephasing ? c.params.Gamma_phi_s() : 0.0;
  std::vector<double> cq, ct, c12, c13, n12, n13;
  std::vector<double> sq, freq, period;
  for (size_t i = 0; i < ratio.size(); ++i) {
    std::vector<double> y12;
    for (size_t k = 0; k < grid.size(); ++k) {
      cq.push_back(ratio[i]);
      ct.push_back(grid[k]);
      double v12 = normalized_coherence(states[i][k], 1, 2);
      c12.push_back(v12);
      c13.push_back(normalized_coherence(states[i][k], 1, 3));
      n12.push_back(natural_decay_prediction(1, 2, gphi, grid[k]));
      n13.push_back(natural_decay_prediction(1, 3, gphi, grid[k]));
      y12.push_back(v12);
    }
    // Revivals show up as periodic plateaus on top of the decay, so look at the log slope.
    std::vector<double> ts;
    std::vector<cplx> slope;
    for (size_t k = 1; k + 1 < grid.size(); ++k) {
      if (!(y12[k - 1] > 0 && y12[k + 1] > 0)) break;
      ts.push_back(grid[k]);
      slope.push_back((std::log(y12[k + 1]) - std::log(y12[k - 1])) / (grid[k + 1] - grid[k - 1]));
    }
    double f = std::nan("");
    if (ts.size() >= 8) {
      cplx mean = 0.0;
      for (auto v : slope) mean += v;
      mean /= static_cast<double>(slope.size());
      double spread = 0.0;
      for (auto& v : slope) {
        v -= mean;
        spread = std::max(spread, std::abs(v));
      }
      if (spread > 1e-6 * std::max(1.0, std::abs(mean))) f = std::abs(fourier_peaks(ts, slope, 1).front().frequency);
    }
    sq.push_back(ratio[i]);
    freq.push_back(f);
    period.push_back(1.0 / f);
  }
  Table& t = r.table("coherence");
  t.add("Omega_over_chi", "1", cq);
  t.add("t", "us", ct);
  t.add("c12", "1", c12);
  t.add("c13", "1", c13);
  t.add("natural12", "1", n12);
  t.add("natural13", "1", n13);
  Table& sp = r.table("revivals");
  sp.add("Omega_over_chi", "1", sq);
  sp.add("frequency", "MHz", freq);
  sp.add("period", "us", period);
  r.scalar("inverse_chi", 1.0 / c.params.chi_s_mp, "us");
}

void run_qnd(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> ratio = c.axis("Omega_over_chi");
  std::vector<double> grid = sample_grid(0.0, c.get("t_max"), c.get("sample_step"));
  const int n_max = static_cast<int>(c.get("n_max"));
  say(o, fmt::format("qnd-check: {} drive strengths", ratio.size()));
  auto states = h4_series(c, o, r, ratio, grid);
  Table& t = r.table("populations");
  std::vector<double> cq, ct, nb;
  std::vector<std::vector<double>> pop(n_max + 1);
  double dev = 0.0;
  for (size_t i = 0; i < ratio.size(); ++i) {
    for (size_t k = 0; k < grid.size(); ++k) {
      const Mat& rs = states[i][k];
      cq.push_back(ratio[i]);
      ct.push_back(grid[k]);
      double nn = 0.0;
      for (int j = 0; j < rs.rows(); ++j) nn += j * rs(j, j).real();
      nb.push_back(nn);
      for (int j = 0; j <= n_max; ++j) {
        double v = rs(j, j).real();
        pop[j].push_back(v);
        dev = std::max(dev, std::abs(v - states[0][k](j, j).real()));
      }
    }
  }
  t.add("Omega_over_chi", "1", cq);
  t.add("t", "us", ct);
  t.add("nbar", "1", nb);
  for (int j = 0; j <= n_max; ++j) t.add(fmt::format("P{}", j), "1", pop[j]);

  // Vacuum rise predicted by storage loss alone for the initial coherent state.
  const double b2 = c.get("beta") * c.get("beta");
  const double T = grid.back();
  const double g1 = c.model.storage_loss ? c.params.Gamma_1_s : 0.0;
  r.scalar("max_population_deviation", dev, "1");
  r.scalar("vacuum_rise", states[0].back()(0, 0).real() - states[0].front()(0, 0).real(), "1");
  r.scalar("vacuum_rise_loss_only", std::exp(-b2 * std::exp(-g1 * T)) - std::exp(-b2), "1");
}

// rabi-calibration

void run_rabi(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  std::vector<double> V = c.axis("V_mp");
  const double t_max = c.get("t_max"), divisor = c.get("divisor");
  std::vector<double> grid = sample_grid(0.0, t_max, c.get("sample_step"));
  const SystemParams& p = c.params;
  const size_t n = V.size();
  std::vector<std::vector<double>> re(n);
  std::vector<double> xi(n), xs(n), res(n), om(n);
  std::vector<SolverStats> st(n);
  say(o, fmt::format("rabi-calibration: {} amplitudes", n));
  parallel_for(static_cast<int>(n), o.workers, [&](int i) {
    om[i] = p.calibration.xi * 1e3 * V[i];
    HilbertSpace space({{kMultiplex, 2}});
    MasterEquation meq;
    meq.space = space;
    meq.h0 = Mat::Zero(2, 2);
    const double Om = om[i];
    meq.drives.push_back({"rabi_mp", sigma_minus().matrix(), [Om](double) { return cplx(0.5 * Om, 0.0); }});
    meq.dissipators.push_back({"relax_mp", sigma_minus().matrix(), p.Gamma_1_mp});
    meq.dissipators.push_back({"dephasing_mp", pauli_z().matrix(), 0.5 * p.Gamma_phi_mp()});
    SolverConfig sc = solver_for(c, grid);
    sc.observables = {{"sigma_minus", sigma_minus().matrix()}};
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    Trajectory tr = evolve(g, meq, sc);
    for (const auto& s : tr["sigma_minus"]) re[i].push_back(reflection_from_sigma_minus(s, p.Gamma_1_mp, Om).real());
    RabiParams fixed;
    fixed.V_mp = V[i];
    fixed.Gamma_1 = p.Gamma_1_mp;
    fixed.Gamma_2 = p.Gamma_2_mp;
    fixed.t0 = 0.0;
    try {
      RabiFit f = fit_rabi(grid, re[i], fixed, divisor);
      xi[i] = f.xi;
      xs[i] = f.xi_sigma;
      res[i] = f.residual;
    } catch (const FitError& e) {
      xi[i] = xs[i] = std::nan("");
      res[i] = e.residual();
    }
    st[i] = tr.stats;
  });
  for (const auto& s : st) r.absorb(s);
  Table& t = r.table("fits");
  t.add("V_mp", "V", V);
  t.add("Omega", "MHz", om);
  t.add("xi", "GHz/V", xi);
  t.add("xi_sigma", "GHz/V", xs);
  t.add("residual", "1", res);
  Table& tr = r.table("reflection");
  tr.add("t", "us", grid);
  for (size_t i = 0; i < n; ++i) tr.add(fmt::format("re_r_{}", i), "1", re[i]);
  double s = 0.0;
  int used = 0;
  for (double v : xi) {
    if (std::isfinite(v)) {
      s += v;
      ++used;
    }
  }
  if (used == 0) throw FitError("no Rabi trace could be fitted", kInf);
  r.scalar("xi_mean", s / used, "GHz/V");
  r.scalar("xi_input", p.calibration.xi, "GHz/V");
}

// wigner-snapshot

void run_wigner(const ScenarioConfig& c, const RunOptions& o, ScenarioResult& r) {
  const int dim = c.model.storage_dim;
  const std::string& source = c.option("source");
  Mat rho;
  std::string prov;
  if (source == "coherent") {
    rho = coherent_state(c.get("beta"), dim).matrix();
    prov = fmt::format("coherent beta = {}", c.get("beta"));
  } else if (source == "thermal") {
    rho = thermal_state(c.get("n_th"), dim).matrix();
    prov = fmt::format("thermal n_th = {}", c.get("n_th"));
  } else if (source == "fock") {
    rho = fock_state(static_cast<int>(c.get("fock_n")), dim).matrix();
    prov = fmt::format("fock n = {}", c.get("fock_n"));
  } else if (source == "superposition") {
    int k = static_cast<int>(c.get("fock_n"));
    if (k < 1 || k >= dim) throw ConfigError("settings.fock_n: must be in [1, storage_dim)");
    Vec v = Vec::Zero(dim);
    v(0) = v(k) = 1.0 / std::sqrt(2.0);
    rho = v * v.adjoint();
    prov = fmt::format("(|0> + |{}>)/sqrt 2", k);
  } else {
    double Omega = c.get("Omega_over_chi") * c.params.chi_s_mp;
    Mat coh = coherent_state(c.get("beta"), dim).matrix();
    SolverStats st;
    say(o, "wigner-snapshot: evolving the storage under the comb");
    rho = mid_storage_states(c.params, Omega, c.get("delta_f_s0"), coh, {c.get("duration")}, c.model, shape_of(c),
                             solver_config(c.solver), o.workers, &st)
              .front();
    r.absorb(st);
    prov = fmt::format("comb drive Omega = {} MHz for {} us from beta = {}", Omega, c.get("duration"), c.get("beta"));
  }
  GridSpec spec;
  spec.x_max = spec.p_max = c.get("x_max");
  spec.nx = spec.np = static_cast<int>(c.get("grid_points"));
  WignerGrid w = wigner(rho, spec);
  const int n_max = static_cast<int>(c.get("n_max"));
  Reconstruction rec = reconstruct_rho(w, n_max);
  Mat truth = rho.topLeftCorner(n_max + 1, n_max + 1);
  CoherenceReport rep = coherence_report(rec.rho, std::min(4, n_max));

  r.grids.push_back({"state", w, prov});
  r.matrices.push_back({"rho", truth});
  r.matrices.push_back({"rho_reconstructed", rec.rho});
  Mat a = annihilation(dim).matrix();
  cplx amp = (a * rho).trace();
  r.scalar("frobenius_error", (rec.rho - truth).norm(), "1");
  r.scalar("raw_trace", rec.raw_trace, "1");
  r.scalar("min_eigenvalue", rec.min_eigenvalue, "1");
  r.scalar("mean_coherence", rep.mean, "1");
  r.scalar("X_wigner", expectation_from_wigner(w, Moment::X), "1");
  r.scalar("P_wigner", expectation_from_wigner(w, Moment::P), "1");
  r.scalar("X_rho", amp.real(), "1");
  r.scalar("P_rho", amp.imag(), "1");
  r.scalar("parity_wigner", expectation_from_wigner(w, Moment::parity), "1");
  r.scalar("spread", thermal_spread(w), "1");
  if (w.extent_warning) r.notes.push_back("grid corners exceed the displacement truncation guard");
}

// Registry

SettingSpec S(const char* key, Dim d, double v, double min = -kInf) { return {key, d, v, min}; }

std::vector<Entry> build_registry() {
  std::vector<Entry> reg;

  {
    Entry e;
    e.schema.name = "photocount-yesno";
    e.description = "Yes-no qubit pi-pulse spectroscopy after a storage displacement; P_e map";
    e.schema.settings = {S("V_max_s", Dim::voltage, 0.01, 0), S("delta_f_yn", Dim::frequency, 0)};
    e.schema.defaults = base_defaults(yes_no_timing(), 15, true, 1e-7, 1e-9);
    std::vector<double> d;
    for (int i = 0; i <= 36; ++i) d.push_back(-1.0 + 0.25 * i);
    e.schema.defaults.sweeps = {{"V_max_s", {0.0, 0.005, 0.01, 0.015}}, {"delta_f_yn", d}};
    e.run = run_yesno;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "photocount-single-tone";
    e.description = "Single-tone multiplexing-qubit spectroscopy; emission coefficient map";
    e.schema.settings = {S("V_max_s", Dim::voltage, 0.015, 0), S("delta_f_mp", Dim::frequency, 0),
                         S("Omega_over_chi", Dim::none, 0.25, 0), S("amplitude", Dim::none, 1.0),
                         S("sample_step", Dim::time, 0.005, 1e-6)};
    e.schema.defaults = base_defaults(probe_timing(), 22, true, 1e-6, 1e-8);
    std::vector<double> d;
    for (int i = 0; i <= 110; ++i) d.push_back(-5.0 + 0.5 * i);
    e.schema.defaults.sweeps = {{"V_max_s", {0.015, 0.03}}, {"delta_f_mp", d}};
    e.run = run_single_tone;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "photocount-multiplexed";
    e.description = "Nine-tone comb probe with demultiplexed photon-number channels versus mean photon number";
    e.schema.settings = {S("nbar", Dim::none, 2.0, 0), S("Omega_over_chi", Dim::none, 0.5, 0),
                         S("channels", Dim::none, 9, 1), S("sample_step", Dim::time, 0.001, 1e-6)};
    e.schema.options = {{"window", {"beats", "probe"}, "beats"}};
    e.schema.defaults = base_defaults(probe_timing(), 20, true, 1e-6, 1e-8);
    std::vector<double> nb;
    for (int i = 0; i <= 20; ++i) nb.push_back(0.5 * i);
    e.schema.defaults.sweeps = {{"nbar", nb}};
    e.run = run_multiplexed;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "calibrate-displacement";
    e.description = "Mean photon number after the displacement pulse versus drive amplitude; linear fit";
    e.schema.settings = {S("eps_max", Dim::rate, 10.0, 0)};
    e.schema.defaults = base_defaults(yes_no_timing(), 12, true, 1e-8, 1e-10);
    e.schema.defaults.sweeps = {{"eps_max", {0, 5, 10, 15, 20, 25, 30}}};
    e.run = run_calibrate;
    reg.push_back(e);
  }
  auto mid_settings = [] {
    return std::vector<SettingSpec>{S("beta", Dim::none, 1.55, 0), S("delta_f_s0", Dim::frequency, 3.96),
                                    S("t_min", Dim::time, 0.1, 1e-6), S("t_max", Dim::time, 5.0, 1e-6),
                                    S("n_durations", Dim::none, 50, 2)};
  };
  OptionSpec shape_gauss{"shape", {"gaussian", "square"}, "gaussian"};
  OptionSpec shape_square{"shape", {"gaussian", "square"}, "square"};
  {
    Entry e;
    e.schema.name = "ramsey-storage";
    e.description = "Storage Ramsey oscillation without drive; single-tone fit";
    e.schema.settings = mid_settings();
    e.schema.options = {shape_gauss};
    e.schema.defaults = base_defaults(probe_timing(), 16, false, 1e-6, 1e-8);
    e.schema.defaults.model.thermal = false;
    e.run = run_ramsey;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "mid-sweep";
    e.description = "Measurement-induced storage dephasing rate and frequency shift versus comb strength";
    e.schema.settings = mid_settings();
    e.schema.settings.push_back(S("Omega_over_chi", Dim::none, 0.5, 0));
    e.schema.settings.push_back(S("two_tone_threshold", Dim::none, 0.9, 0));
    e.schema.options = {shape_gauss};
    e.schema.defaults = base_defaults(probe_timing(), 16, false, 1e-6, 1e-8);
    e.schema.defaults.model.thermal = false;
    std::vector<double> q;
    for (int i = 0; i <= 12; ++i) q.push_back(i / 10.0);
    e.schema.defaults.sweeps = {{"Omega_over_chi", q}};
    e.run = run_mid;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "single-drive-decoherence";
    e.description = "Storage coherences under one detuned probe tone, compared with the 4x4 eigenvalue theory";
    e.schema.settings = {S("Omega_over_chi", Dim::none, 0.5, 0), S("delta_over_chi", Dim::none, 0.0),
                         S("beta", Dim::none, 1.55, 0),          S("t_max", Dim::time, 2.0, 1e-6),
                         S("sample_step", Dim::time, 0.02, 1e-6), S("n_max", Dim::none, 4, 1),
                         S("t_skip", Dim::time, 0.1, 0),          S("floor", Dim::none, 1e-6, 0),
                         S("via_wigner", Dim::none, 0, 0)};
    e.schema.options = {{"form", {"split", "printed"}, "split"}, {"fit_range", {"tail", "full"}, "tail"}};
    e.schema.defaults = base_defaults(probe_timing(), 12, false, 1e-7, 1e-10);
    e.schema.defaults.model.thermal = false;
    std::vector<double> q;
    for (int i = 0; i <= 12; ++i) q.push_back(-1.0 + 0.5 * i);
    e.schema.defaults.sweeps = {{"delta_over_chi", q}};
    e.run = run_single_drive;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "coherence-revivals";
    e.description = "Normalized storage coherences |rho_12| and |rho_13| versus time under the comb";
    e.schema.settings = {S("Omega_over_chi", Dim::none, 1.0, 0), S("beta", Dim::none, 1.55, 0),
                         S("t_max", Dim::time, 3.0, 1e-6), S("sample_step", Dim::time, 0.01, 1e-6),
                         S("delta_f_s0", Dim::frequency, 0.0)};
    e.schema.options = {shape_square};
    e.schema.defaults = base_defaults(probe_timing(), 14, false, 1e-7, 1e-10);
    e.schema.defaults.model.thermal = false;
    e.schema.defaults.sweeps = {{"Omega_over_chi", {0.0, 0.5, 1.0}}};
    e.run = run_revivals;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "qnd-check";
    e.description = "Storage photon-number populations and mean photon number versus time and comb strength";
    e.schema.settings = {S("Omega_over_chi", Dim::none, 0.05, 0), S("beta", Dim::none, 1.55, 0),
                         S("t_max", Dim::time, 5.0, 1e-6), S("sample_step", Dim::time, 0.05, 1e-6),
                         S("n_max", Dim::none, 6, 0), S("delta_f_s0", Dim::frequency, 0.0)};
    e.schema.options = {shape_square};
    e.schema.defaults = base_defaults(probe_timing(), 14, false, 1e-8, 1e-10);
    e.schema.defaults.model.thermal = false;
    e.schema.defaults.sweeps = {{"Omega_over_chi", {0.0, 0.03, 0.06, 0.09}}};
    e.run = run_qnd;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "rabi-calibration";
    e.description = "Damped Rabi oscillations of the bare multiplexing qubit in reflection; fitted xi";
    e.schema.settings = {S("V_mp", Dim::voltage, 0.02, 0), S("t_max", Dim::time, 1.0, 1e-6),
                         S("sample_step", Dim::time, 0.01, 1e-6), S("divisor", Dim::none, 16.0, 1e-12)};
    e.schema.defaults = base_defaults(probe_timing(), 8, false, 1e-8, 1e-10);
    e.schema.defaults.sweeps = {{"V_mp", {0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04}}};
    e.run = run_rabi;
    reg.push_back(e);
  }
  {
    Entry e;
    e.schema.name = "wigner-snapshot";
    e.description = "Wigner grid of a storage state, reconstructed density matrix and mean coherence";
    e.schema.settings = {S("beta", Dim::none, 1.5, 0),           S("n_th", Dim::none, 0.03, 0),
                         S("fock_n", Dim::none, 1, 0),           S("Omega_over_chi", Dim::none, 0.5, 0),
                         S("duration", Dim::time, 1.0, 1e-6),    S("delta_f_s0", Dim::frequency, 0.0),
                         S("n_max", Dim::none, 10, 0),           S("x_max", Dim::none, 4.0, 0.1),
                         S("grid_points", Dim::none, 81, 3)};
    e.schema.options = {{"source", {"coherent", "thermal", "fock", "superposition", "mid"}, "coherent"},
                        shape_gauss};
    e.schema.defaults = base_defaults(probe_timing(), 16, false, 1e-7, 1e-10);
    e.schema.defaults.model.thermal = false;
    e.run = run_wigner;
    reg.push_back(e);
  }
  return reg;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> reg = build_registry();
  return reg;
}

const Entry& find(const std::string& name) {
  for (const auto& e : registry())
    if (e.schema.name == name) return e;
  throw ConfigError(fmt::format("unknown scenario '{}'", name));
}

}  // namespace

const ScenarioSchema& scenario_schema(const std::string& name) { return find(name).schema; }

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.schema.name);
  return out;
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& e : registry()) out.push_back({e.schema.name, e.description});
  return out;
}

ScenarioConfig default_config(const std::string& name) {
  const ScenarioSchema& s = scenario_schema(name);
  ScenarioConfig c = s.defaults;
  c.scenario = name;
  for (const auto& k : s.settings) c.settings[k.key] = k.value;
  for (const auto& o : s.options) c.options[o.key] = o.value;
  return c;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  validate_config(cfg);
  const Entry& e = find(cfg.scenario);
  ScenarioResult r;
  r.scenario = cfg.scenario;
  r.config = cfg;
  auto start = std::chrono::steady_clock::now();
  e.run(cfg, opt, r);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace mpx
