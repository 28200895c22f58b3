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

#include "mpx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "mpx/errors.hpp"
#include "mpx/parallel.hpp"

namespace mpx {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Eigen::Matrix4cd decoherence_matrix(int n, int m, double delta, double Omega, double Gamma_1_mp, double chi_s_mp,
                                    DecoherenceForm form) {
  if (n < 0 || m < 0) throw DimensionError("photon numbers must be >= 0");
  const cplx I(0, 1);
  double ct = 0.5 * (n + m) * kTwoPi * chi_s_mp;
  double cd = form == DecoherenceForm::printed ? ct : 0.5 * (n - m) * kTwoPi * chi_s_mp;
  double g = Gamma_1_mp, w = kTwoPi * delta, r = kTwoPi * Omega;
  Eigen::Matrix4cd M;
  M << -g / 2, -w + ct, 0, 0,
       w - ct, -g / 2, -r, 0,
       0, r, -g, -g - I * cd,
       0, 0, -I * cd, 0;
  return M;
}

DecoherenceRate decoherence_rate_theory(int n, int m, double delta, double Omega, double Gamma_1_mp,
                                        double chi_s_mp, DecoherenceForm form) {
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(
      decoherence_matrix(n, m, delta, Omega, Gamma_1_mp, chi_s_mp, form), false);
  const auto& ev = es.eigenvalues();
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (ev(i).real() > ev(best).real()) best = i;
  DecoherenceRate out;
  out.rate = -ev(best).real();
  // Eigenvalue noise around an exactly imaginary root.
  double scale = Gamma_1_mp + kTwoPi * (std::abs(delta) + std::abs(Omega) + (n + m) * std::abs(chi_s_mp));
  if (std::abs(out.rate) < 1e-12 * scale) out.rate = 0.0;
  out.shift = ev(best).imag() / kTwoPi;
  return out;
}

Mat coherent_decay_solution(cplx alpha0, double Gamma_1, double Gamma_phi, double t, int dim) {
  cplx a = alpha0 * std::exp(-0.5 * Gamma_1 * t);
  Vec amp(dim);
  amp(0) = 1.0;
  for (int n = 1; n < dim; ++n) amp(n) = amp(n - 1) * a / std::sqrt(static_cast<double>(n));
  Mat rho = std::exp(-std::norm(a)) * amp * amp.adjoint();
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) rho(n, m) *= std::exp(-Gamma_phi * (n - m) * (n - m) * t);
  return rho;
}

cplx storage_amplitude(const Mat& rho, const HilbertSpace& space) {
  Mat rs = partial_trace(rho, space, kStorage);
  Mat a = annihilation(static_cast<int>(rs.rows())).matrix();
  return (a * rs).trace();
}

std::vector<Mat> mid_storage_states(const SystemParams& params, double Omega, double delta_f_s0, const Mat& storage_rho0,
                                    const std::vector<double>& durations, const ModelOptions& model,
                                    WindowShape shape, const SolverConfig& solver, int workers, SolverStats* stats) {
  const size_t n = durations.size();
  std::vector<Mat> out(n);
  if (n == 0) return out;
  for (double d : durations)
    if (!(d > 0)) throw DimensionError("pulse durations must be > 0");
  if (Omega == 0.0 || shape == WindowShape::square) {
    double tmax = *std::max_element(durations.begin(), durations.end());
    MasterEquation meq = build_h4_mid(params, Omega, delta_f_s0, tmax, model, shape);
    SolverConfig sc = solver;
    std::vector<double> snaps(durations);
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    sc.times = {0.0};
    sc.times.insert(sc.times.end(), snaps.begin(), snaps.end());
    sc.snapshot_times = snaps;
    sc.observables.clear();
    sc.on_output = nullptr;
    Trajectory tr = evolve(ground_state(meq.space, storage_rho0), meq, sc);
    for (size_t i = 0; i < n; ++i) {
      size_t k = std::lower_bound(snaps.begin(), snaps.end(), durations[i]) - snaps.begin();
      out[i] = partial_trace(tr.snapshots.at(k), meq.space, kStorage);
    }
    if (stats) merge(*stats, tr.stats);
    return out;
  }
  std::vector<SolverStats> st(n);
  parallel_for(static_cast<int>(n), workers, [&](int i) {
    double d = durations[i];
    MasterEquation meq = build_h4_mid(params, Omega, delta_f_s0, d, model, shape);
    SolverConfig sc = solver;
    sc.times = {0.0, d};
    sc.snapshot_times = {d};
    sc.observables.clear();
    sc.on_output = nullptr;
    Trajectory tr = evolve(ground_state(meq.space, storage_rho0), meq, sc);
    out[i] = partial_trace(tr.final_state, meq.space, kStorage);
    st[i] = tr.stats;
  });
  if (stats)
    for (const auto& s : st) merge(*stats, s);
  return out;
}

void mid_quadratures(const MidSweepConfig& cfg, double Omega, std::vector<double>& x, std::vector<double>& p,
                     SolverStats* stats) {
  Mat coh = coherent_state(cfg.beta, cfg.model.storage_dim).matrix();
  std::vector<Mat> rs = mid_storage_states(cfg.params, Omega, cfg.delta_f_s0, coh, cfg.durations, cfg.model,
                                           cfg.shape, cfg.solver, cfg.workers, stats);
  x.assign(rs.size(), 0.0);
  p.assign(rs.size(), 0.0);
  for (size_t i = 0; i < rs.size(); ++i) {
    Mat a = annihilation(static_cast<int>(rs[i].rows())).matrix();
    cplx v = (a * rs[i]).trace();
    x[i] = v.real();
    p[i] = v.imag();
  }
}

std::vector<DephasingPoint> dephasing_sweep(const MidSweepConfig& cfg, const std::vector<double>& omegas,
                                           SolverStats* stats) {
  std::vector<DephasingPoint> out(omegas.size());
  for (size_t k = 0; k < omegas.size(); ++k) {
    DephasingPoint& pt = out[k];
    pt.Omega = omegas[k];
    mid_quadratures(cfg, omegas[k], pt.x, pt.p, stats);
    bool two = omegas[k] / cfg.params.chi_s_mp >= cfg.two_tone_threshold;
    pt.model = two ? "two-tone" : "single";
    try {
      if (two) {
        pt.two_tone = fit_ramsey_two_tone(pt.x, pt.p, cfg.durations);
        pt.Gamma_d_s = pt.two_tone.Gamma_d_s;
        pt.delta_f_s = pt.two_tone.delta_f_s;
        pt.residual = pt.two_tone.residual;
      } else {
        RamseyFit f = fit_ramsey(pt.x, pt.p, cfg.durations);
        pt.Gamma_d_s = f.Gamma_d_s;
        pt.delta_f_s = f.delta_f_s;
        pt.residual = f.residual;
      }
    } catch (const FitError& e) {
      pt.error = e.what();
      pt.residual = e.residual();
      pt.Gamma_d_s = std::nan("");
      pt.delta_f_s = std::nan("");
    }
  }
  return out;
}

int interior_maximum(const std::vector<double>& y) {
  int best = -1;
  for (int i = 1; i + 1 < static_cast<int>(y.size()); ++i)
    if (y[i] >= y[i - 1] && y[i] >= y[i + 1] && (best < 0 || y[i] > y[best])) best = i;
  return best;
}

double refine_extremum(const std::vector<double>& x, const std::vector<double>& y, int i) {
  if (i <= 0 || i + 1 >= static_cast<int>(y.size())) return x.at(i);
  // Parabola through three (possibly uneven) points.
  double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
  double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
  double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
  double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
  if (a == 0) return x1;
  double xv = -b / (2 * a);
  return std::clamp(xv, x0, x2);
}

}  // namespace mpx
