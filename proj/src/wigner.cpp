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

#include "mpx/wigner.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "mpx/errors.hpp"

namespace mpx {

namespace {

constexpr double kPi = std::numbers::pi;

RMat trapezoid_weights(const WignerGrid& g) {
  const int nx = static_cast<int>(g.x.size()), np = static_cast<int>(g.p.size());
  RMat w(nx, np);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < np; ++j) {
      double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
      double wp = (j == 0 || j == np - 1) ? 0.5 : 1.0;
      w(i, j) = wx * wp * g.dx() * g.dp();
    }
  return w;
}

int support(const Mat& rho, double floor = 1e-8) {
  int n = 0;
  for (int k = 0; k < rho.rows(); ++k)
    if (std::abs(rho(k, k)) > floor) n = k;
  return n;
}

}  // namespace

std::vector<double> uniform_axis(double half_width, int n) {
  if (n < 2) throw ReconstructionError("grid needs at least 2 points per axis");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = -half_width + 2.0 * half_width * i / (n - 1);
  return v;
}

Mat displacement_elements(cplx beta, int dim) {
  Mat d(dim, dim);
  double pre = std::exp(-0.5 * std::norm(beta));
  // Column 0 is the coherent state; row 0 is its mirror under beta -> -conj(beta).
  d(0, 0) = pre;
  for (int n = 1; n < dim; ++n) d(0, n) = d(0, n - 1) * (-std::conj(beta)) / std::sqrt(static_cast<double>(n));
  for (int m = 0; m + 1 < dim; ++m) {
    double s = 1.0 / std::sqrt(static_cast<double>(m + 1));
    d(m + 1, 0) = beta * d(m, 0) * s;
    for (int n = 1; n < dim; ++n)
      d(m + 1, n) = (std::sqrt(static_cast<double>(n)) * d(m, n - 1) + beta * d(m, n)) * s;
  }
  return d;
}

WignerGrid wigner(const Mat& rho, const GridSpec& spec) {
  if (rho.rows() != rho.cols()) throw DimensionError("wigner: density matrix must be square");
  WignerGrid g;
  g.x = uniform_axis(spec.x_max, spec.nx);
  g.p = uniform_axis(spec.p_max, spec.np);
  const int dim = static_cast<int>(rho.rows());
  g.W.resize(spec.nx, spec.np);
  // rho_nm (-1)^n, contracted with <m|D(2 alpha)|n>.
  Mat rp = rho;
  for (int n = 1; n < dim; n += 2) rp.row(n) *= -1.0;
  for (int i = 0; i < spec.nx; ++i)
    for (int j = 0; j < spec.np; ++j) {
      Mat d = displacement_elements(2.0 * cplx(g.x[i], g.p[j]), dim);
      // sum_nm rp(n, m) d(m, n) = trace(rp d)
      g.W(i, j) = (2.0 / kPi) * (rp.cwiseProduct(d.transpose())).sum().real();
    }
  double reach = std::sqrt(static_cast<double>(support(rho))) + 2.0;
  if (std::min(spec.x_max, spec.p_max) < reach) {
    g.extent_warning = true;
    g.note += fmt::format("; grid half-width below sqrt(n_max)+2 = {:.3g}", reach);
  }
  return g;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& spec) {
  if (rho.space().modes().size() != 1) throw DimensionError("wigner needs a single-mode state");
  return wigner(rho.matrix(), spec);
}

RVec hermite_psi_all(int nmax, double x) {
  RVec out(nmax + 1);
  out(0) = std::pow(2.0 / kPi, 0.25) * std::exp(-x * x);
  if (nmax >= 1) out(1) = 2.0 * x * out(0);
  for (int n = 1; n < nmax; ++n)
    out(n + 1) = 2.0 * x / std::sqrt(n + 1.0) * out(n) - std::sqrt(n / (n + 1.0)) * out(n - 1);
  return out;
}

double hermite_psi(int n, double x) {
  if (n < 0) throw DimensionError("hermite_psi needs n >= 0");
  return hermite_psi_all(n, x)(n);
}

std::vector<Mat> wigner_maps(int n_max, const std::vector<double>& x, const std::vector<double>& p,
                             const YQuadrature& q) {
  const int N = n_max + 1, nx = static_cast<int>(x.size()), np = static_cast<int>(p.size());
  const int ny = q.points;
  RVec y(ny), wy(ny);
  double h = 2.0 * q.y_max / (ny - 1);
  for (int k = 0; k < ny; ++k) {
    y(k) = -q.y_max + k * h;
    wy(k) = (k == 0 || k == ny - 1) ? 0.5 * h : h;
  }
  Mat E(ny, np);
  for (int k = 0; k < ny; ++k)
    for (int j = 0; j < np; ++j) E(k, j) = wy(k) * std::polar(1.0 / kPi, -2.0 * p[j] * y(k));
  std::vector<Mat> maps(N * N, Mat(nx, np));
  RMat A(N, ny), B(N, ny);
  Mat F(N * N, ny);
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < ny; ++k) {
      A.col(k) = hermite_psi_all(n_max, x[i] + 0.5 * y(k));
      B.col(k) = hermite_psi_all(n_max, x[i] - 0.5 * y(k));
    }
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m) F.row(n * N + m) = A.row(n).cwiseProduct(B.row(m)).cast<cplx>();
    Mat R = F * E;
    for (int idx = 0; idx < N * N; ++idx) maps[idx].row(i) = R.row(idx);
  }
  return maps;
}

Mat wigner_map_nm(int n, int m, const std::vector<double>& x, const std::vector<double>& p, const YQuadrature& q) {
  if (n < 0 || m < 0) throw DimensionError("wigner_map_nm needs n, m >= 0");
  int N = std::max(n, m);
  auto maps = wigner_maps(N, x, p, q);
  return maps[n * (N + 1) + m];
}

double integrate(const WignerGrid& g, const RMat& f) { return trapezoid_weights(g).cwiseProduct(f).sum(); }

cplx integrate(const WignerGrid& g, const Mat& f) {
  return (trapezoid_weights(g).cast<cplx>().cwiseProduct(f)).sum();
}

Reconstruction reconstruct_rho(const WignerGrid& w, int n_max, const YQuadrature& q) {
  if (n_max < 0) throw ReconstructionError("n_max must be >= 0");
  if (w.x.size() < 2 || w.p.size() < 2) throw ReconstructionError("grid too small");
  const double tol = 0.1 + 1e-9;
  if (w.dx() > tol || w.dp() > tol)
    throw ReconstructionError(fmt::format("grid too coarse: dx = {:.4g}, dp = {:.4g} (need <= 0.1)", w.dx(), w.dp()));
  double peak = w.W.cwiseAbs().maxCoeff();
  double edge = std::max({w.W.row(0).cwiseAbs().maxCoeff(), w.W.row(w.W.rows() - 1).cwiseAbs().maxCoeff(),
                          w.W.col(0).cwiseAbs().maxCoeff(), w.W.col(w.W.cols() - 1).cwiseAbs().maxCoeff()});
  if (edge > 1e-2 * peak)
    throw ReconstructionError(
        fmt::format("grid too small: |W| on the border is {:.3g} of the peak (need <= 1e-2)", edge / peak));
  auto maps = wigner_maps(n_max, w.x, w.p, q);
  RMat wts = trapezoid_weights(w).cwiseProduct(w.W);
  const int N = n_max + 1;
  Mat rho(N, N);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) rho(n, m) = kPi * (wts.cast<cplx>().cwiseProduct(maps[n * N + m].conjugate())).sum();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Reconstruction out;
  out.raw_trace = rho.trace().real();
  if (!(out.raw_trace > 0)) throw ReconstructionError(fmt::format("non-positive raw trace {}", out.raw_trace));
  out.rho = rho / out.raw_trace;
  out.min_eigenvalue = min_eigenvalue(out.rho);
  return out;
}

double expectation_from_wigner(const WignerGrid& w, Moment which) {
  const int nx = static_cast<int>(w.x.size()), np = static_cast<int>(w.p.size());
  if (which == Moment::parity) {
    if (w.x.front() > 0 || w.x.back() < 0 || w.p.front() > 0 || w.p.back() < 0)
      throw ReconstructionError("origin outside the grid");
    int i = std::min(nx - 2, static_cast<int>(std::floor(-w.x.front() / w.dx())));
    int j = std::min(np - 2, static_cast<int>(std::floor(-w.p.front() / w.dp())));
    double u = (0.0 - w.x[i]) / w.dx(), v = (0.0 - w.p[j]) / w.dp();
    double w0 = (1 - u) * (1 - v) * w.W(i, j) + u * (1 - v) * w.W(i + 1, j) + (1 - u) * v * w.W(i, j + 1) +
                u * v * w.W(i + 1, j + 1);
    return 0.5 * kPi * w0;
  }
  RMat f(nx, np);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < np; ++j) f(i, j) = (which == Moment::X ? w.x[i] : w.p[j]) * w.W(i, j);
  return integrate(w, f);
}

double thermal_spread(const WignerGrid& w) {
  const int nx = static_cast<int>(w.x.size()), np = static_cast<int>(w.p.size());
  double norm = integrate(w, w.W);
  double mx = expectation_from_wigner(w, Moment::X) / norm;
  double mp = expectation_from_wigner(w, Moment::P) / norm;
  RMat fx(nx, np), fp(nx, np);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < np; ++j) {
      fx(i, j) = (w.x[i] - mx) * (w.x[i] - mx) * w.W(i, j);
      fp(i, j) = (w.p[j] - mp) * (w.p[j] - mp) * w.W(i, j);
    }
  double vx = integrate(w, fx) / norm, vp = integrate(w, fp) / norm;
  return 2.0 * std::sqrt(vx * vp);
}

double revival_time(double delta_tau, double alpha2, double chi_s_s_yn) {
  return 2.0 * delta_tau * (1.0 + 2.0 * alpha2 * chi_s_s_yn * delta_tau);
}

double parity_ramsey_signal(double t, const ParityRamseyParams& p) {
  double chi = p.chi_s_yn;
  if (p.kerr_shift) chi = 1.0 / revival_time(0.5 / p.chi_s_yn, p.alpha2, p.chi_s_s_yn);
  double th = 2.0 * kPi * chi * t;
  return std::exp(p.alpha2 * (std::cos(th) - 1.0)) * std::cos(p.alpha2 * std::sin(th)) *
         std::exp(-p.Gamma_2_yn * t - p.gamma * p.alpha2 * t);
}

double normalized_coherence(const Mat& rho, int n, int m, double floor) {
  if (n < 0 || m < 0 || n >= rho.rows() || m >= rho.rows()) throw DimensionError("coherence index out of range");
  double pn = rho(n, n).real(), pm = rho(m, m).real();
  if (pn <= floor || pm <= floor) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(rho(n, m)) / std::sqrt(pn * pm);
}

CoherenceReport coherence_report(const Mat& rho, int n_max, double floor) {
  CoherenceReport r;
  r.rho = rho;
  int N = std::min<int>(n_max, static_cast<int>(rho.rows()) - 1) + 1;
  r.normalized = RMat::Constant(N, N, std::numeric_limits<double>::quiet_NaN());
  double sum = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      r.normalized(i, j) = normalized_coherence(rho, i, j, floor);
      if (i > j && !std::isnan(r.normalized(i, j))) {
        sum += r.normalized(i, j);
        ++r.pairs;
      }
    }
  r.mean = r.pairs > 0 ? sum / r.pairs : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double mean_coherence(const Mat& rho, int n_max, double floor) { return coherence_report(rho, n_max, floor).mean; }

double natural_decay_prediction(int n, int m, double Gamma_phi, double t) {
  double d = n - m;
  return std::exp(-Gamma_phi * d * d * t);
}

}  // namespace mpx
