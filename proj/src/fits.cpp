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

#include "mpx/fits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/NonLinearOptimization>

#include "mpx/errors.hpp"

namespace mpx {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

struct LmFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = RVec;
  using ValueType = RVec;
  using JacobianType = RMat;

  const ResidualFn* f;
  const JacobianFn* jac;
  int n_in, n_out;

  int inputs() const { return n_in; }
  int values() const { return n_out; }

  int operator()(const RVec& x, RVec& r) const {
    (*f)(x, r);
    return 0;
  }

  int df(const RVec& x, RMat& j) const {
    if (*jac) {
      (*jac)(x, j);
      return 0;
    }
    RVec r0(n_out), r1(n_out);
    (*f)(x, r0);
    RVec xp = x;
    for (int k = 0; k < n_in; ++k) {
      double h = 1e-7 * std::max(1.0, std::abs(x(k)));
      xp(k) = x(k) + h;
      (*f)(xp, r1);
      j.col(k) = (r1 - r0) / h;
      xp(k) = x(k);
    }
    return 0;
  }
};

void check_lengths(const std::vector<double>& x, const std::vector<double>& p, const std::vector<double>& t) {
  if (x.size() != t.size() || p.size() != t.size())
    throw FitError(fmt::format("quadrature lengths {} / {} do not match {} times", x.size(), p.size(), t.size()),
                   0.0);
  if (t.size() < 8) throw FitError("need at least 8 samples", 0.0);
}

std::vector<cplx> to_complex(const std::vector<double>& x, const std::vector<double>& p) {
  std::vector<cplx> z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = {x[i], p[i]};
  return z;
}

// A, Gamma and phi for a single tone at f, from the demodulated envelope.
void seed_envelope(const std::vector<double>& t, const std::vector<cplx>& z, double f, double& A, double& gamma,
                   double& phi) {
  double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<cplx> w(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    w[i] = z[i] * std::polar(1.0, -kTwoPi * f * t[i]);
    double m = std::abs(w[i]);
    if (m <= 0) continue;
    double wt = m * m;
    sw += wt;
    st += wt * t[i];
    sy += wt * std::log(m);
    stt += wt * t[i] * t[i];
    sty += wt * t[i] * std::log(m);
  }
  double den = sw * stt - st * st;
  double slope = den > 0 ? (sw * sty - st * sy) / den : 0.0;
  double icpt = sw > 0 ? (sy - slope * st) / sw : 0.0;
  gamma = std::max(0.0, -slope);
  A = std::exp(icpt);
  cplx acc = 0;
  for (size_t i = 0; i < z.size(); ++i) acc += w[i] * std::exp(gamma * t[i]);
  phi = std::arg(acc);
}

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - kPi;
}

LeastSquaresResult least_squares(const ResidualFn& f, int n_residuals, const RVec& x0, const JacobianFn& jac) {
  LmFunctor fun{&f, &jac, static_cast<int>(x0.size()), n_residuals};
  Eigen::LevenbergMarquardt<LmFunctor> lm(fun);
  lm.parameters.maxfev = 400 * (static_cast<int>(x0.size()) + 1);
  lm.parameters.ftol = 1e-12;
  lm.parameters.xtol = 1e-12;
  RVec x = x0;
  auto status = lm.minimize(x);
  LeastSquaresResult out;
  out.x = x;
  out.iterations = static_cast<int>(lm.iter);
  out.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
                  status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;
  RVec r(n_residuals);
  f(x, r);
  out.residual_norm = r.norm();
  if (!r.allFinite()) out.converged = false;
  RMat j(n_residuals, x.size());
  fun.df(x, j);
  int dof = std::max(1, n_residuals - static_cast<int>(x.size()));
  RMat jtj = j.transpose() * j;
  out.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse() * (r.squaredNorm() / dof);
  return out;
}

std::vector<SpectralPeak> fourier_peaks(const std::vector<double>& t, const std::vector<cplx>& z, int count,
                                        double max_frequency) {
  const size_t n = t.size();
  if (n < 4 || z.size() != n) throw FitError("fourier_peaks needs at least 4 matching samples", 0.0);
  double span = t.back() - t.front();
  if (max_frequency <= 0) max_frequency = 0.5 * (n - 1) / span;
  double df = 1.0 / (8.0 * span);
  int m = static_cast<int>(std::ceil(max_frequency / df));
  std::vector<double> wts(n);
  for (size_t i = 0; i < n; ++i) {
    double left = i > 0 ? t[i] - t[i - 1] : 0.0;
    double right = i + 1 < n ? t[i + 1] - t[i] : 0.0;
    wts[i] = 0.5 * (left + right);
  }
  auto transform = [&](double f) {
    cplx s = 0;
    for (size_t i = 0; i < n; ++i) s += wts[i] * z[i] * std::polar(1.0, -kTwoPi * f * t[i]);
    return s / span;
  };
  std::vector<double> freqs, mags;
  for (int k = -m; k <= m; ++k) {
    freqs.push_back(k * df);
    mags.push_back(std::abs(transform(k * df)));
  }
  std::vector<size_t> idx;
  for (size_t k = 0; k < mags.size(); ++k) {
    double l = k > 0 ? mags[k - 1] : -1.0, r = k + 1 < mags.size() ? mags[k + 1] : -1.0;
    if (mags[k] >= l && mags[k] > r) idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return mags[a] > mags[b]; });
  std::vector<SpectralPeak> out;
  for (size_t k : idx) {
    if (static_cast<int>(out.size()) >= count) break;
    double f = freqs[k];
    if (k > 0 && k + 1 < mags.size()) {
      double a = mags[k - 1], b = mags[k], c = mags[k + 1];
      double d = a - 2 * b + c;
      if (d < 0) f += 0.5 * (a - c) / d * df;
    }
    out.push_back({f, transform(f)});
  }
  return out;
}

void ramsey_model(const RamseyFit& f, const std::vector<double>& t, std::vector<double>& x, std::vector<double>& p) {
  x.resize(t.size());
  p.resize(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    double e = f.A * std::exp(-f.Gamma_d_s * t[i]);
    double th = kTwoPi * f.delta_f_s * t[i] + f.phi;
    x[i] = e * std::cos(th);
    p[i] = e * std::sin(th);
  }
}

void ramsey_two_tone_model(const TwoToneRamseyFit& f, const std::vector<double>& t, std::vector<double>& x,
                           std::vector<double>& p) {
  x.resize(t.size());
  p.resize(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    double e = f.A * std::exp(-f.Gamma_d_s * t[i]);
    double th = kTwoPi * f.delta_f_s * t[i] + f.phi;
    double eta = kTwoPi * f.nu * t[i];
    x[i] = e * (std::cos(th) + f.zeta * std::cos(eta + f.psi_X));
    p[i] = e * (std::sin(th) + f.zeta * std::sin(eta + f.psi_P));
  }
}

RamseyFit fit_ramsey(const std::vector<double>& x, const std::vector<double>& p, const std::vector<double>& t) {
  check_lengths(x, p, t);
  auto z = to_complex(x, p);
  double scale = 0;
  for (auto v : z) scale = std::max(scale, std::abs(v));
  if (scale < 1e-12) throw FitError("degenerate input: zero amplitude", 0.0);
  auto peaks = fourier_peaks(t, z, 1);
  double f0 = peaks.front().frequency;
  double span = t.back() - t.front();
  if (std::abs(f0) * span < 2.0)
    throw FitError(fmt::format("fewer than two oscillation periods (f = {:.4g} MHz over {:.4g} us)", f0, span), 0.0);
  double A0, g0, phi0;
  seed_envelope(t, z, f0, A0, g0, phi0);

  const int n = static_cast<int>(t.size());
  ResidualFn res = [&](const RVec& q, RVec& r) {
    for (int i = 0; i < n; ++i) {
      double e = q(0) * std::exp(-q(3) * t[i]);
      double th = kTwoPi * q(1) * t[i] + q(2);
      r(i) = e * std::cos(th) - x[i];
      r(n + i) = e * std::sin(th) - p[i];
    }
  };
  JacobianFn jac = [&](const RVec& q, RMat& j) {
    for (int i = 0; i < n; ++i) {
      double ex = std::exp(-q(3) * t[i]);
      double th = kTwoPi * q(1) * t[i] + q(2);
      double c = std::cos(th), s = std::sin(th);
      j(i, 0) = c * ex;
      j(i, 1) = -q(0) * s * ex * kTwoPi * t[i];
      j(i, 2) = -q(0) * s * ex;
      j(i, 3) = -t[i] * q(0) * c * ex;
      j(n + i, 0) = s * ex;
      j(n + i, 1) = q(0) * c * ex * kTwoPi * t[i];
      j(n + i, 2) = q(0) * c * ex;
      j(n + i, 3) = -t[i] * q(0) * s * ex;
    }
  };
  RVec q0(4);
  q0 << A0, f0, phi0, g0;
  auto lsq = least_squares(res, 2 * n, q0, jac);
  if (!lsq.converged || !lsq.x.allFinite()) throw FitError("ramsey fit did not converge", lsq.residual_norm);
  RamseyFit out;
  out.A = lsq.x(0);
  out.delta_f_s = lsq.x(1);
  out.phi = lsq.x(2);
  if (out.A < 0) {
    out.A = -out.A;
    out.phi += kPi;
  }
  out.phi = wrap_angle(out.phi);
  out.Gamma_d_s = std::max(0.0, lsq.x(3));
  out.residual = lsq.residual_norm;
  out.sigma = lsq.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

TwoToneRamseyFit fit_ramsey_two_tone(const std::vector<double>& x, const std::vector<double>& p,
                                     const std::vector<double>& t) {
  RamseyFit base = fit_ramsey(x, p, t);
  const int n = static_cast<int>(t.size());
  // Second tone seeded from what the single-tone model leaves behind.
  std::vector<double> mx, mp;
  ramsey_model(base, t, mx, mp);
  std::vector<cplx> resid(n);
  for (int i = 0; i < n; ++i) resid[i] = {x[i] - mx[i], p[i] - mp[i]};
  auto peaks = fourier_peaks(t, resid, 1);
  double nu0 = std::abs(peaks.front().frequency);
  // Undo the common decay when estimating the relative amplitude.
  cplx acc = 0;
  double norm = 0;
  for (int i = 0; i < n; ++i) {
    double g = std::exp(base.Gamma_d_s * t[i]);
    acc += resid[i] * g * std::polar(1.0, -kTwoPi * peaks.front().frequency * t[i]);
    norm += 1.0;
  }
  cplx amp = acc / norm;
  double zeta0 = base.A > 0 ? std::abs(amp) / base.A : 0.0;
  double psi0 = std::arg(amp);
  double psiP0 = peaks.front().frequency >= 0 ? psi0 : -psi0 + kPi;
  double psiX0 = peaks.front().frequency >= 0 ? psi0 : -psi0;

  ResidualFn res = [&](const RVec& q, RVec& r) {
    for (int i = 0; i < n; ++i) {
      double e = q(0) * std::exp(-q(3) * t[i]);
      double th = kTwoPi * q(1) * t[i] + q(2);
      double eta = kTwoPi * q(5) * t[i];
      r(i) = e * (std::cos(th) + q(4) * std::cos(eta + q(6))) - x[i];
      r(n + i) = e * (std::sin(th) + q(4) * std::sin(eta + q(7))) - p[i];
    }
  };
  JacobianFn jac = [&](const RVec& q, RMat& j) {
    j.setZero();
    for (int i = 0; i < n; ++i) {
      double ex = std::exp(-q(3) * t[i]);
      double th = kTwoPi * q(1) * t[i] + q(2);
      double eta = kTwoPi * q(5) * t[i];
      double c = std::cos(th), s = std::sin(th);
      double cx = std::cos(eta + q(6)), sx = std::sin(eta + q(6));
      double cp = std::cos(eta + q(7)), sp = std::sin(eta + q(7));
      double A = q(0), z = q(4);
      double X = A * ex * (c + z * cx), P = A * ex * (s + z * sp);
      j(i, 0) = ex * (c + z * cx);
      j(i, 1) = -A * s * ex * kTwoPi * t[i];
      j(i, 2) = -A * s * ex;
      j(i, 3) = -t[i] * X;
      j(i, 4) = A * cx * ex;
      j(i, 5) = -A * z * sx * ex * kTwoPi * t[i];
      j(i, 6) = -A * z * sx * ex;
      j(n + i, 0) = ex * (s + z * sp);
      j(n + i, 1) = A * c * ex * kTwoPi * t[i];
      j(n + i, 2) = A * c * ex;
      j(n + i, 3) = -t[i] * P;
      j(n + i, 4) = A * sp * ex;
      j(n + i, 5) = A * z * cp * ex * kTwoPi * t[i];
      j(n + i, 7) = A * z * cp * ex;
    }
  };
  RVec q0(8);
  q0 << base.A, base.delta_f_s, base.phi, base.Gamma_d_s, zeta0, nu0, psiX0, psiP0;
  auto lsq = least_squares(res, 2 * n, q0, jac);
  if (!lsq.converged || !lsq.x.allFinite())
    throw FitError("two-tone ramsey fit did not converge", lsq.residual_norm);
  TwoToneRamseyFit out;
  const RVec& q = lsq.x;
  out.A = q(0);
  out.delta_f_s = q(1);
  out.phi = q(2);
  out.Gamma_d_s = std::max(0.0, q(3));
  out.zeta = q(4);
  out.nu = q(5);
  out.psi_X = q(6);
  out.psi_P = q(7);
  if (out.A < 0) {
    out.A = -out.A;
    out.phi += kPi;
    out.psi_X += kPi;
    out.psi_P += kPi;
  }
  if (out.zeta < 0) {
    out.zeta = -out.zeta;
    out.psi_X += kPi;
    out.psi_P += kPi;
  }
  if (out.nu < 0) {
    // cos(-a + psi) = cos(a - psi), sin(-a + psi) = sin(a - psi + pi)
    out.nu = -out.nu;
    out.psi_X = -out.psi_X;
    out.psi_P = -out.psi_P + kPi;
  }
  out.phi = wrap_angle(out.phi);
  out.psi_X = wrap_angle(out.psi_X);
  out.psi_P = wrap_angle(out.psi_P);
  out.residual = lsq.residual_norm;
  return out;
}

std::vector<double> rotating_frame_quadrature(const std::vector<double>& x, const std::vector<double>& p,
                                              const std::vector<double>& t, double delta_f_s) {
  std::vector<double> out(t.size());
  for (size_t i = 0; i < t.size(); ++i)
    out[i] = 2.0 * (cplx(x[i], p[i]) * std::polar(1.0, -kTwoPi * delta_f_s * t[i])).real();
  return out;
}

ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 3) throw FitError("exponential fit needs at least 3 matching samples", 0.0);
  const int n = static_cast<int>(t.size());
  double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (int i = 0; i < n; ++i) {
    if (y[i] <= 0) continue;
    double w = y[i] * y[i], l = std::log(y[i]);
    sw += w;
    st += w * t[i];
    sy += w * l;
    stt += w * t[i] * t[i];
    sty += w * t[i] * l;
  }
  if (sw <= 0) throw FitError("exponential fit: no positive samples", 0.0);
  double den = sw * stt - st * st;
  double slope = den > 0 ? (sw * sty - st * sy) / den : 0.0;
  double a0 = std::exp((sy - slope * st) / sw);
  ResidualFn res = [&](const RVec& q, RVec& r) {
    for (int i = 0; i < n; ++i) r(i) = q(0) * std::exp(-q(1) * t[i]) - y[i];
  };
  JacobianFn jac = [&](const RVec& q, RMat& j) {
    for (int i = 0; i < n; ++i) {
      double e = std::exp(-q(1) * t[i]);
      j(i, 0) = e;
      j(i, 1) = -t[i] * q(0) * e;
    }
  };
  RVec q0(2);
  q0 << a0, -slope;
  auto lsq = least_squares(res, n, q0, jac);
  if (!lsq.converged || !lsq.x.allFinite()) throw FitError("exponential fit did not converge", lsq.residual_norm);
  return {lsq.x(0), lsq.x(1), lsq.residual_norm};
}

}  // namespace mpx
