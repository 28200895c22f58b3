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
#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "mpx/errors.hpp"
#include "mpx/hilbert.hpp"
#include "mpx/readout.hpp"

using namespace mpx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Steady state of the Bloch equations from the null vector of the column-stacked Liouvillian.
cplx bloch_sigma_minus(double delta, double Omega, double g1, double g2) {
  Mat z(2, 2), x(2, 2), sm(2, 2), id = Mat::Identity(2, 2);
  z << -1, 0, 0, 1;
  x << 0, 1, 1, 0;
  sm << 0, 1, 0, 0;
  Mat h = kTwoPi * (delta * z / 2.0 + Omega * x / 2.0);
  // vec(A rho B) = (B^T kron A) vec(rho)
  Mat L = -cplx(0, 1) * (kron(id, h) - kron(h.transpose(), id));
  auto diss = [&](const Mat& c, double rate) {
    Mat cdc = c.adjoint() * c;
    L += rate * (kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id));
  };
  diss(sm, g1);
  diss(z, 0.5 * (g2 - 0.5 * g1));
  Eigen::ComplexEigenSolver<Mat> es(L);
  int k = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(k))) k = i;
  Vec v = es.eigenvectors().col(k);
  Mat rho(2, 2);
  rho << v(0), v(2), v(1), v(3);
  rho /= rho.trace();
  return (sm * rho).trace();
}

}  // namespace

TEST_CASE("steady-state reflection agrees with the Bloch equations") {
  const double g1 = 1.0 / 0.044, g2 = 1.0 / 0.088;
  for (double delta : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
    for (double Omega : {0.05, 0.5, 2.0}) {
      cplx ref = reflection_from_sigma_minus(bloch_sigma_minus(delta, Omega, g1, g2), g1, Omega);
      CHECK(std::abs(steady_state_reflection(delta, Omega, g1, g2) - ref) < 1e-10);
    }
  }
}

TEST_CASE("reflection limits") {
  const double g1 = 2.0, g2 = 1.0;
  // Weak resonant drive: full emission, r = 1 - Gamma_1/Gamma_2.
  CHECK(steady_state_reflection(0.0, 1e-6, g1, g2).real() == doctest::Approx(-1.0).epsilon(1e-9));
  // Saturated qubit reflects the drive.
  CHECK(std::abs(steady_state_reflection(0.0, 1e4, g1, g2) - 1.0) < 1e-6);
  // Far detuned.
  CHECK(std::abs(steady_state_reflection(1e5, 0.1, g1, g2) - 1.0) < 1e-5);
  CHECK_THROWS_AS(steady_state_reflection(0.0, 0.1, 0.0, 1.0), Error);
}

TEST_CASE("emission coefficient") {
  auto e = emission_coefficient({0.0, 0.5, -0.2}, 10.0, 2.0);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == doctest::Approx(10.0 * 0.5 / (kTwoPi * 2.0)));
  CHECK(e[2] == doctest::Approx(-10.0 * 0.2 / (kTwoPi * 2.0)));
  CHECK_THROWS_AS(emission_coefficient({1.0}, 1.0, 0.0), Error);
}

TEST_CASE("demultiplexing is orthogonal on whole beat periods") {
  const double s = 4.9;
  const int n = 2001;
  const double T = 2.0 / s;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = T * i / (n - 1);
  for (int kp = 0; kp < 9; ++kp) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = std::cos(kTwoPi * s * kp * t[i]);
    auto ch = demultiplex_all(t, y, 9, s, 0.0, T);
    for (int k = 0; k < 9; ++k) {
      if (k == kp) CHECK(ch[k].value == doctest::Approx(1.0).epsilon(1e-12));
      else CHECK(std::abs(ch[k].value) < 1e-10);
      CHECK(std::abs(ch[k].quadrature) < 1e-10);
    }
  }
}

TEST_CASE("demultiplexing is linear and reads constants on channel 0") {
  const double s = 4.9;
  const int n = 1001;
  std::vector<double> t(n), a(n), b(n), c(n);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < n; ++i) {
    t[i] = 0.1 + 3.0 / s * i / (n - 1);
    a[i] = nd(rng);
    b[i] = nd(rng);
    c[i] = 2.0 * a[i] - 0.5 * b[i];
  }
  for (int k = 0; k < 5; ++k) {
    double va = demultiplex(t, a, k, s, t.front(), t.back()).value;
    double vb = demultiplex(t, b, k, s, t.front(), t.back()).value;
    double vc = demultiplex(t, c, k, s, t.front(), t.back()).value;
    CHECK(std::abs(vc - (2.0 * va - 0.5 * vb)) < 1e-13);
  }
  std::vector<double> k0(n, 0.37);
  CHECK(demultiplex(t, k0, 0, s, t.front(), t.back()).value == doctest::Approx(0.37));
  CHECK_THROWS_AS(demultiplex(t, k0, 0, s, 0.0, 1.0), Error);
  CHECK_THROWS_AS(demultiplex(t, k0, 0, s, 0.5, 0.5), Error);
}

TEST_CASE("Rabi calibration fit") {
  RabiParams p;
  p.A = 0.8;
  p.xi = 0.543;
  p.V_mp = 0.01;
  p.Gamma_1 = 10.0;
  p.Gamma_2 = 6.0;
  p.phi = 0.4;
  p.T = 0.6;
  p.r_ss = 0.1;
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.005 * i);
    y.push_back(rabi_calibration_model(t.back(), p));
  }
  RabiFit f = fit_rabi(t, y, p);
  CHECK(f.xi == doctest::Approx(0.543).epsilon(1e-6));
  CHECK(f.params.T == doctest::Approx(0.6).epsilon(1e-5));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 0.01);
  std::vector<double> noisy = y;
  for (double& v : noisy) v += nd(rng);
  RabiFit g = fit_rabi(t, noisy, p);
  CHECK(g.xi == doctest::Approx(0.543).epsilon(0.02));
  CHECK(g.xi_sigma > 0.0);

  // The decay correction: 16 as printed and 4 give different frequencies away from Gamma_1 = 2 Gamma_2.
  double w16 = rabi_angular_frequency(p, 16.0), w4 = rabi_angular_frequency(p, 4.0);
  double drive = kTwoPi * 1e3 * 0.543 * 0.01;
  CHECK(w16 == doctest::Approx(std::sqrt(drive * drive - 4.0 / 256.0)));
  CHECK(w4 == doctest::Approx(std::sqrt(drive * drive - 4.0 / 16.0)));
  CHECK_THROWS_AS(fit_rabi({0, 1, 2}, {0, 1, 2}, p), FitError);
}
