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

#include "mpx/readout.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mpx/errors.hpp"
#include "mpx/fits.hpp"

namespace mpx {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

std::vector<double> emission_coefficient(const std::vector<double>& sigma_y, double Gamma_1, double Omega) {
  if (Omega == 0.0) throw Error("emission coefficient undefined for Omega = 0");
  std::vector<double> out(sigma_y.size());
  double s = Gamma_1 / (kTwoPi * Omega);
  for (size_t i = 0; i < sigma_y.size(); ++i) out[i] = s * sigma_y[i];
  return out;
}

cplx steady_state_reflection(double delta, double Omega, double Gamma_1, double Gamma_2) {
  if (!(Gamma_1 > 0 && Gamma_2 > 0)) throw Error("steady_state_reflection needs positive rates");
  double w = kTwoPi * delta, R = kTwoPi * Omega;
  double d = Gamma_2 * Gamma_2 + w * w;
  double z = -Gamma_1 * d / (Gamma_1 * d + R * R * Gamma_2);
  return 1.0 + Gamma_1 * z * cplx(Gamma_2, -w) / d;
}

cplx reflection_from_sigma_minus(cplx sigma_minus, double Gamma_1, double Omega) {
  if (Omega == 0.0) throw Error("reflection undefined for Omega = 0");
  return 1.0 - cplx(0.0, 1.0) * Gamma_1 * sigma_minus / (kPi * Omega);
}

ChannelSignal demultiplex(const std::vector<double>& t, const std::vector<double>& y, int k, double spacing,
                          double t0, double t1) {
  if (t.size() != y.size()) throw Error("demultiplex: time and signal lengths differ");
  if (!(spacing > 0)) throw Error("demultiplex: spacing must be positive");
  if (!(t1 > t0)) throw Error("demultiplex: empty window");
  if (t.empty() || t0 < t.front() - 1e-12 || t1 > t.back() + 1e-12)
    throw Error(fmt::format("demultiplex: window [{}, {}] outside trajectory", t0, t1));
  double slack = 1e-9 * std::max(1.0, std::abs(t1));
  double ci = 0, si = 0, first = 0, last = 0;
  bool started = false;
  double w = kTwoPi * spacing * k;
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] < t0 - slack || t[i + 1] > t1 + slack) continue;
    double h = t[i + 1] - t[i];
    ci += 0.5 * h * (y[i] * std::cos(w * t[i]) + y[i + 1] * std::cos(w * t[i + 1]));
    si += 0.5 * h * (y[i] * std::sin(w * t[i]) + y[i + 1] * std::sin(w * t[i + 1]));
    if (!started) first = t[i];
    started = true;
    last = t[i + 1];
  }
  if (!started) throw Error("demultiplex: window contains no samples");
  double T = last - first;
  double norm = k == 0 ? 1.0 / T : 2.0 / T;
  return {k, norm * ci, norm * si, first, last};
}

std::vector<ChannelSignal> demultiplex_all(const std::vector<double>& t, const std::vector<double>& y, int channels,
                                           double spacing, double t0, double t1) {
  std::vector<ChannelSignal> out;
  for (int k = 0; k < channels; ++k) out.push_back(demultiplex(t, y, k, spacing, t0, t1));
  return out;
}

double rabi_angular_frequency(const RabiParams& p, double divisor) {
  double drive = kTwoPi * 1e3 * p.xi * p.V_mp;  // rad/us
  double corr = (p.Gamma_1 - 2.0 * p.Gamma_2) / divisor;
  double s = drive * drive - corr * corr;
  return s > 0 ? std::sqrt(s) : 0.0;
}

double rabi_calibration_model(double t, const RabiParams& p, double divisor) {
  double u = t - p.t0;
  return p.r_ss + p.A * std::cos(rabi_angular_frequency(p, divisor) * u + p.phi) * std::exp(-u / p.T);
}

RabiFit fit_rabi(const std::vector<double>& t, const std::vector<double>& re_r, const RabiParams& fixed,
                 double divisor) {
  if (t.size() != re_r.size() || t.size() < 8) throw FitError("fit_rabi needs at least 8 matching samples", 0.0);
  if (!(fixed.V_mp > 0)) throw FitError("fit_rabi needs V_mp > 0", 0.0);
  const int n = static_cast<int>(t.size());
  double mean = 0;
  for (double v : re_r) mean += v;
  mean /= n;
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = re_r[i] - mean;
  auto peaks = fourier_peaks(t, z, 1);
  double f0 = std::abs(peaks.front().frequency);
  double span = t.back() - t.front();
  if (f0 * span < 2.0) throw FitError("fewer than two Rabi periods in the trace", 0.0);
  // Invert the frequency correction for the seed.
  double corr = (fixed.Gamma_1 - 2.0 * fixed.Gamma_2) / divisor;
  double w0 = kTwoPi * f0;
  double xi0 = std::sqrt(w0 * w0 + corr * corr) / (kTwoPi * 1e3 * fixed.V_mp);
  double amp0 = 0;
  for (int i = 0; i < n; ++i) amp0 = std::max(amp0, std::abs(re_r[i] - mean));

  auto unpack = [&](const RVec& q) {
    RabiParams p = fixed;
    p.A = q(0);
    p.xi = q(1);
    p.phi = q(2);
    p.T = q(3);
    p.r_ss = q(4);
    return p;
  };
  ResidualFn res = [&](const RVec& q, RVec& r) {
    RabiParams p = unpack(q);
    for (int i = 0; i < n; ++i) r(i) = rabi_calibration_model(t[i], p, divisor) - re_r[i];
  };
  // Seed phase and decay by a coarse scan, then polish everything together.
  RVec best(5);
  double best_norm = INFINITY;
  RVec r(n);
  for (int ip = 0; ip < 12; ++ip)
    for (double T0 : {0.1 * span, 0.3 * span, span, 3.0 * span}) {
      RVec q(5);
      q << amp0, xi0, -kPi + ip * kPi / 6.0, T0, mean;
      res(q, r);
      if (r.norm() < best_norm) {
        best_norm = r.norm();
        best = q;
      }
    }
  auto lsq = least_squares(res, n, best);
  if (!lsq.converged || !lsq.x.allFinite()) throw FitError("rabi fit did not converge", lsq.residual_norm);
  RabiFit out;
  out.params = unpack(lsq.x);
  if (out.params.A < 0) {
    out.params.A = -out.params.A;
    out.params.phi += kPi;
  }
  out.params.phi = wrap_angle(out.params.phi);
  out.params.xi = std::abs(out.params.xi);
  out.xi = out.params.xi;
  out.covariance = lsq.covariance;
  out.xi_sigma = std::sqrt(std::max(0.0, lsq.covariance(1, 1)));
  out.residual = lsq.residual_norm;
  return out;
}

}  // namespace mpx
