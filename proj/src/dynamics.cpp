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

#include "mpx/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mpx/errors.hpp"

namespace mpx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

SpMat sparse(const Mat& m) { return m.sparseView(); }

cplx sparse_expect(const SpMat& op, const Mat& rho) {
  cplx s = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SpMat::InnerIterator it(op, k); it; ++it) s += it.value() * rho(it.col(), it.row());
  return s;
}

// Right-hand side without materializing the superoperator.
class Rhs {
 public:
  explicit Rhs(const MasterEquation& meq) {
    Mat k0 = -kI * kTwoPi * meq.h0;
    for (const auto& d : meq.dissipators) {
      if (d.rate == 0.0) continue;
      k0 -= 0.5 * d.rate * (d.op.adjoint() * d.op);
      Mat c = std::sqrt(d.rate) * d.op;
      jump_.push_back(sparse(c));
      jump_adj_.push_back(sparse(c.adjoint()));
    }
    k0_ = sparse(k0);
    for (const auto& d : meq.drives) {
      op_.push_back(sparse(d.op));
      op_adj_.push_back(sparse(d.op.adjoint()));
      coeff_.push_back(d.coeff);
    }
  }

  void operator()(double t, const Mat& rho, Mat& out) {
    ++evals;
    // k + k^dagger is only right for a Hermitian argument; stage states carry rounding noise.
    h_ = 0.5 * (rho + rho.adjoint());
    Mat k = k0_ * h_;
    for (size_t j = 0; j < op_.size(); ++j) {
      cplx c = coeff_[j](t);
      if (c == 0.0) continue;
      k.noalias() += (-kI * kTwoPi * c) * (op_[j] * h_);
      k.noalias() += (-kI * kTwoPi * std::conj(c)) * (op_adj_[j] * h_);
    }
    out = k + k.adjoint();
    for (size_t j = 0; j < jump_.size(); ++j) {
      Mat tmp = jump_[j] * h_;
      out.noalias() += tmp * jump_adj_[j];
    }
  }

  long evals = 0;

 private:
  SpMat k0_;
  std::vector<SpMat> op_, op_adj_, jump_, jump_adj_;
  std::vector<CoeffFn> coeff_;
  Mat h_;
};

double err_norm(const Mat& err, const Mat& y0, const Mat& y1, double rtol, double atol) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < err.cols(); ++j)
    for (Eigen::Index i = 0; i < err.rows(); ++i) {
      double sc = atol + rtol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
      double e = std::abs(err(i, j)) / sc;
      s += e * e;
    }
  return std::sqrt(s / static_cast<double>(err.size()));
}

void symmetrize(Mat& rho) { rho = 0.5 * (rho + rho.adjoint()).eval(); }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Mat MasterEquation::hamiltonian(double t) const {
  Mat h = h0;
  for (const auto& d : drives) {
    cplx c = d.coeff(t);
    h += c * d.op + std::conj(c) * d.op.adjoint();
  }
  return h;
}

void MasterEquation::validate() const {
  int n = space.dim();
  if (h0.rows() != n || h0.cols() != n) throw DimensionError("static Hamiltonian does not match space");
  if (hermiticity_error(h0) > 1e-10) throw InvalidStateError("static Hamiltonian is not Hermitian");
  for (const auto& d : drives)
    if (d.op.rows() != n || d.op.cols() != n)
      throw DimensionError(fmt::format("drive '{}' does not match space", d.name));
  for (const auto& d : dissipators) {
    if (d.op.rows() != n || d.op.cols() != n)
      throw DimensionError(fmt::format("dissipator '{}' does not match space", d.name));
    if (!(d.rate >= 0)) throw ConfigError(fmt::format("dissipator '{}' has negative rate {}", d.name, d.rate));
  }
}

void SolverConfig::validate() const {
  if (times.empty()) throw ConfigError("solver needs at least one output time");
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("output times must be ascending");
  if (method == Method::rk4 && !(dt > 0)) throw ConfigError("rk4 step must be positive");
  if (method == Method::dopri5 && !(rtol > 0 && atol > 0)) throw ConfigError("tolerances must be positive");
  for (double s : snapshot_times)
    if (s < times.front() || s > times.back()) throw ConfigError(fmt::format("snapshot time {} outside run", s));
}

const std::vector<cplx>& Trajectory::operator[](const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw Error(fmt::format("no observable named '{}'", name));
}

std::vector<double> Trajectory::real(const std::string& name) const {
  const auto& v = (*this)[name];
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

void merge(SolverStats& into, const SolverStats& s) {
  into.steps += s.steps;
  into.rejected += s.rejected;
  into.rhs_evals += s.rhs_evals;
  into.max_trace_error = std::max(into.max_trace_error, s.max_trace_error);
  into.max_hermiticity_error = std::max(into.max_hermiticity_error, s.max_hermiticity_error);
  into.min_snapshot_eigenvalue = std::min(into.min_snapshot_eigenvalue, s.min_snapshot_eigenvalue);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

Trajectory evolve(const DensityMatrix& rho0, const MasterEquation& meq, const SolverConfig& config) {
  if (!(rho0.space() == meq.space)) throw DimensionError("initial state lives on a different space");
  return evolve(rho0.matrix(), meq, config);
}

Trajectory evolve(const Mat& rho_in, const MasterEquation& meq, const SolverConfig& config) {
  meq.validate();
  config.validate();
  if (rho_in.rows() != meq.space.dim()) throw DimensionError("initial state dimension mismatch");

  Rhs rhs(meq);
  const double t0 = config.times.front(), t_end = config.times.back();

  // Every stop is either an output time, a snapshot time or a drive breakpoint.
  std::vector<double> stops(config.times.begin(), config.times.end());
  stops.insert(stops.end(), config.snapshot_times.begin(), config.snapshot_times.end());
  for (double b : meq.breakpoints)
    if (b > t0 && b < t_end) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  std::vector<SpMat> obs;
  Trajectory traj;
  for (const auto& o : config.observables) {
    if (o.op.rows() != meq.space.dim()) throw DimensionError(fmt::format("observable '{}' mismatch", o.name));
    obs.push_back(sparse(o.op));
    traj.names.push_back(o.name);
  }
  traj.values.assign(obs.size(), {});

  Mat rho = rho_in;
  const cplx tr0 = rho.trace();
  auto& st = traj.stats;
  size_t next_out = 0, next_snap = 0;
  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  auto record = [&](double t) {
    while (next_out < config.times.size() && config.times[next_out] == t) {
      traj.times.push_back(t);
      for (size_t i = 0; i < obs.size(); ++i) traj.values[i].push_back(sparse_expect(obs[i], rho));
      if (config.on_output) config.on_output(t, rho);
      ++next_out;
    }
    while (next_snap < snaps.size() && snaps[next_snap] == t) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(rho);
      st.min_snapshot_eigenvalue = std::min(st.min_snapshot_eigenvalue, min_eigenvalue(rho));
      ++next_snap;
    }
  };

  auto accept = [&](double t, Mat& y) {
    st.max_hermiticity_error = std::max(st.max_hermiticity_error, hermiticity_error(y));
    symmetrize(y);
    double terr = std::abs(y.trace() - tr0);
    st.max_trace_error = std::max(st.max_trace_error, terr);
    if (terr > config.trace_limit)
      throw IntegrationError(fmt::format("trace drifted by {:.3e} at t = {}", terr, t), t);
    ++st.steps;
  };

  record(t0);
  const int n = static_cast<int>(rho.rows());
  Mat k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n), k6(n, n), k7(n, n), y(n, n);

  if (config.method == Method::rk4) {
    double t = t0;
    for (size_t s = 1; s < stops.size(); ++s) {
      double len = stops[s] - t;
      int m = std::max(1, static_cast<int>(std::ceil(len / config.dt - 1e-9)));
      double h = len / m;
      for (int i = 0; i < m; ++i) {
        double tt = t + i * h;
        rhs(tt, rho, k1);
        rhs(tt + 0.5 * h, rho + 0.5 * h * k1, k2);
        rhs(tt + 0.5 * h, rho + 0.5 * h * k2, k3);
        rhs(tt + h, rho + h * k3, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        accept(tt + h, rho);
      }
      t = stops[s];
      record(t);
    }
  } else {
    double t = t0;
    double h = 0.0;
    bool have_k1 = false;
    for (size_t s = 1; s < stops.size(); ++s) {
      const double target = stops[s];
      while (t < target) {
        if (!have_k1) {
          rhs(t, rho, k1);
          have_k1 = true;
        }
        if (h <= 0.0) {
          double d0 = err_norm(rho, rho, rho, config.rtol, config.atol);
          double d1 = err_norm(k1, rho, rho, config.rtol, config.atol);
          h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
          h = std::min(h, target - t);
        }
        if (config.max_step > 0) h = std::min(h, config.max_step);
        bool last = false;
        double hs = h;
        if (t + hs >= target - 1e-12 * std::max(1.0, std::abs(target))) {
          hs = target - t;
          last = true;
        }
        if (hs < 1e-13 * std::max(1.0, std::abs(t)))
          throw IntegrationError(fmt::format("step size underflow at t = {}", t), t);
        rhs(t + c2 * hs, rho + hs * (a21 * k1), k2);
        rhs(t + c3 * hs, rho + hs * (a31 * k1 + a32 * k2), k3);
        rhs(t + c4 * hs, rho + hs * (a41 * k1 + a42 * k2 + a43 * k3), k4);
        rhs(t + c5 * hs, rho + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5);
        rhs(t + hs, rho + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
        y = rho + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + hs, y, k7);
        Mat err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double en = err_norm(err, rho, y, config.rtol, config.atol);
        if (!std::isfinite(en)) throw IntegrationError(fmt::format("non-finite state at t = {}", t), t);
        if (en <= 1.0) {
          t = last ? target : t + hs;
          accept(t, y);
          rho.swap(y);
          // FSAL; symmetrization moves the state by rounding only.
          k1.swap(k7);
          double fac = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
          if (!last || fac < 1.0) h = hs * fac;
        } else {
          ++st.rejected;
          h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
      }
      record(target);
    }
  }
  st.rhs_evals = rhs.evals;
  traj.final_state = rho;
  return traj;
}

}  // namespace mpx
