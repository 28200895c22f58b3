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

#include <doctest.h>

#include "mpx/analysis.hpp"
#include "mpx/errors.hpp"
#include "mpx/fits.hpp"

using namespace mpx;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

}  // namespace

TEST_CASE("Levenberg-Marquardt on a curved valley") {
  ResidualFn f = [](const RVec& q, RVec& r) {
    r(0) = 10.0 * (q(1) - q(0) * q(0));
    r(1) = 1.0 - q(0);
  };
  RVec x0(2);
  x0 << -1.2, 1.0;
  auto res = least_squares(f, 2, x0);
  CHECK(res.converged);
  CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Fourier peak location") {
  auto t = grid(0.0, 5.0, 251);
  std::vector<cplx> z;
  for (double v : t) z.push_back(0.7 * std::polar(1.0, kTwoPi * 3.3 * v) + 0.2 * std::polar(1.0, -kTwoPi * 1.1 * v));
  auto pk = fourier_peaks(t, z, 2);
  REQUIRE(pk.size() == 2);
  CHECK(pk[0].frequency == doctest::Approx(3.3).epsilon(1e-3));
  CHECK(pk[1].frequency == doctest::Approx(-1.1).epsilon(1e-2));
}

TEST_CASE("Ramsey fit, noiseless and noisy") {
  auto t = grid(0.1, 5.0, 50);
  std::vector<double> x, p;
  for (double v : t) {
    double e = 1.55 * std::exp(-0.5 * v), th = kTwoPi * 3.96 * v + 0.3;
    x.push_back(e * std::cos(th));
    p.push_back(e * std::sin(th));
  }
  RamseyFit f = fit_ramsey(x, p, t);
  CHECK(f.A == doctest::Approx(1.55).epsilon(1e-6));
  CHECK(f.delta_f_s == doctest::Approx(3.96).epsilon(1e-6));
  CHECK(f.Gamma_d_s == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(f.phi == doctest::Approx(0.3).epsilon(1e-6));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 0.02 * 1.55);
  for (size_t i = 0; i < t.size(); ++i) {
    x[i] += nd(rng);
    p[i] += nd(rng);
  }
  RamseyFit g = fit_ramsey(x, p, t);
  CHECK(g.Gamma_d_s == doctest::Approx(0.5).epsilon(0.05));
  CHECK(g.delta_f_s == doctest::Approx(3.96).epsilon(0.01));
  std::vector<double> flat(t.size(), 0.0);
  CHECK_THROWS_AS(fit_ramsey(flat, flat, t), FitError);
}

TEST_CASE("two-tone Ramsey fit") {
  auto t = grid(0.1, 5.0, 100);
  TwoToneRamseyFit ref;
  ref.A = 1.2;
  ref.delta_f_s = 3.9;
  ref.nu = 2.3;
  ref.zeta = 0.25;
  ref.phi = 0.2;
  ref.psi_X = -0.7;
  ref.psi_P = 1.1;
  ref.Gamma_d_s = 0.8;
  std::vector<double> x, p;
  for (double v : t) {
    double e = ref.A * std::exp(-ref.Gamma_d_s * v);
    double th = kTwoPi * ref.delta_f_s * v + ref.phi, eta = kTwoPi * ref.nu * v;
    x.push_back(e * (std::cos(th) + ref.zeta * std::cos(eta + ref.psi_X)));
    p.push_back(e * (std::sin(th) + ref.zeta * std::sin(eta + ref.psi_P)));
  }
  TwoToneRamseyFit f = fit_ramsey_two_tone(x, p, t);
  CHECK(f.delta_f_s == doctest::Approx(3.9).epsilon(1e-4));
  CHECK(f.nu == doctest::Approx(2.3).epsilon(1e-4));
  CHECK(f.zeta == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(f.Gamma_d_s == doctest::Approx(0.8).epsilon(1e-4));
  // With zeta = 0 the model is the single-tone one.
  TwoToneRamseyFit nested = ref;
  nested.zeta = 0.0;
  std::vector<double> x2, p2, x1, p1;
  ramsey_two_tone_model(nested, t, x2, p2);
  RamseyFit single{ref.A, ref.delta_f_s, ref.phi, ref.Gamma_d_s, 0.0, {}};
  ramsey_model(single, t, x1, p1);
  for (size_t i = 0; i < t.size(); ++i) {
    CHECK(x1[i] == doctest::Approx(x2[i]));
    CHECK(p1[i] == doctest::Approx(p2[i]));
  }
}

TEST_CASE("rotating-frame quadrature") {
  auto t = grid(0.0, 2.0, 21);
  std::vector<double> x, p;
  for (double v : t) {
    x.push_back(0.8 * std::cos(kTwoPi * 3.0 * v));
    p.push_back(0.8 * std::sin(kTwoPi * 3.0 * v));
  }
  for (double q : rotating_frame_quadrature(x, p, t, 3.0)) CHECK(q == doctest::Approx(1.6));
}

TEST_CASE("exponential fit") {
  auto t = grid(0.1, 2.0, 40);
  std::vector<double> y;
  for (double v : t) y.push_back(0.9 * std::exp(-1.7 * v));
  ExpFit f = fit_exponential(t, y);
  CHECK(f.rate == doctest::Approx(1.7).epsilon(1e-8));
  CHECK(f.amplitude == doctest::Approx(0.9).epsilon(1e-8));
  CHECK_THROWS_AS(fit_exponential({0.0, 1.0}, {1.0, 0.5}), FitError);
}

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
  CHECK(wrap_angle(kTwoPi + 0.5) == doctest::Approx(0.5));
  CHECK(wrap_angle(-kPi - 0.1) == doctest::Approx(kPi - 0.1));
}

TEST_CASE("decoherence eigenvalue theory") {
  const double g1 = 1.0 / 0.044, chi = 4.9;
  for (int n = 0; n < 4; ++n)
    for (int m = n + 1; m <= 4; ++m) {
      CHECK(decoherence_rate_theory(n, m, 2.0, 0.0, g1, chi).rate == doctest::Approx(0.0));
      for (double d = -chi; d <= 5 * chi; d += 0.25 * chi)
        CHECK(decoherence_rate_theory(n, m, d, 0.5 * chi, g1, chi).rate >= 0.0);
    }
  // Mirror symmetry about the midpoint of the two resonances.
  for (double off : {0.3, 1.7, 6.0}) {
    double a = decoherence_rate_theory(1, 2, 1.5 * chi + off, 0.5 * chi, g1, chi).rate;
    double b = decoherence_rate_theory(1, 2, 1.5 * chi - off, 0.5 * chi, g1, chi).rate;
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
  // Far from resonance the drive barely dephases.
  CHECK(decoherence_rate_theory(0, 1, 40 * chi, 0.5 * chi, g1, chi).rate < 0.05);
}

TEST_CASE("coherent decay solution") {
  const double g1 = 0.26, gphi = 0.37, t = 1.3;
  Mat rho = coherent_decay_solution(1.5, g1, gphi, t, 20);
  double n = 2.25 * std::exp(-g1 * t);
  CHECK(rho(0, 0).real() == doctest::Approx(std::exp(-n)));
  CHECK(rho(2, 2).real() == doctest::Approx(std::exp(-n) * n * n / 2.0));
  CHECK(std::abs(rho(1, 3)) / std::sqrt(rho(1, 1).real() * rho(3, 3).real()) ==
        doctest::Approx(std::exp(-4.0 * gphi * t)));
}

TEST_CASE("extremum helpers") {
  std::vector<double> x = grid(0.0, 1.0, 11), y;
  for (double v : x) y.push_back(-(v - 0.43) * (v - 0.43));
  int i = interior_maximum(y);
  CHECK(i == 4);
  CHECK(refine_extremum(x, y, i) == doctest::Approx(0.43));
  CHECK(interior_maximum(x) == -1);
}
