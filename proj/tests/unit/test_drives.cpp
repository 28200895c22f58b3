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

#include "mpx/drives.hpp"
#include "mpx/errors.hpp"

using namespace mpx;

TEST_CASE("gaussian pulse values") {
  Envelope g = gaussian_pulse(0.1, 0.025);
  CHECK(window(g, 0.05) == doctest::Approx(1.0));
  CHECK(window(g, 0.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(window(g, 0.1) == doctest::Approx(std::exp(-2.0)));
  CHECK(window(g, -1e-9) == 0.0);
  CHECK(window(g, 0.1 + 1e-9) == 0.0);
  CHECK(window(gaussian_pulse(0.1, 0.025, 0.3, 2.0), 0.35) == doctest::Approx(2.0));
  // Truncated, not renormalized.
  double area = 0.025 * std::sqrt(2.0 * std::numbers::pi) * std::erf(2.0 / std::sqrt(2.0));
  CHECK(window_area(g) == doctest::Approx(area).epsilon(1e-8));
  CHECK_THROWS_AS(gaussian_pulse(0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(gaussian_pulse(1.0, -0.1), ConfigError);
}

TEST_CASE("square pulse") {
  Envelope s = square_pulse(2.0, 0.5, 0.7);
  CHECK(window(s, 0.4) == 0.0);
  CHECK(window(s, 1.5) == 0.7);
  CHECK(window_area(s) == doctest::Approx(1.4));
  CHECK(energy(s) == doctest::Approx(0.98));
}

TEST_CASE("comb tones") {
  Envelope base = square_pulse(1.0);
  Envelope c = make_comb(9, 4.9, base);
  REQUIRE(c.tones.size() == 9);
  for (int k = 0; k < 9; ++k) CHECK(c.tones[k].offset == doctest::Approx(-4.9 * k));
  // Aligned phases add up at t = 0.
  CHECK(std::abs(comb_factor(c, 0.0)) == doctest::Approx(9.0));
  // Every tone completes an integer number of cycles after 1/spacing.
  CHECK(std::abs(comb_factor(c, 1.0 / 4.9) - 9.0) < 1e-9);
  Envelope one = make_comb(1, 4.9, gaussian_pulse(2.0, 0.5));
  Envelope g = gaussian_pulse(2.0, 0.5);
  for (double t : {0.0, 0.3, 1.0, 1.7}) CHECK(std::abs(evaluate(one, t) - evaluate(g, t)) < 1e-15);
  CHECK_THROWS_AS(make_comb(0, 4.9, base), ConfigError);
  CHECK_THROWS_AS(make_comb(3, 4.9, base, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(make_comb(2, 4.9, c), ConfigError);
}

TEST_CASE("comb tone phases and offsets") {
  Envelope c = make_comb(2, 3.0, square_pulse(1.0), {0.0, 0.5});
  double t = 0.21;
  cplx expect = 1.0 + std::polar(1.0, -2.0 * std::numbers::pi * 3.0 * t + 0.5);
  CHECK(std::abs(evaluate(c, t) - expect) < 1e-14);
}

TEST_CASE("energy scales with amplitude squared") {
  Envelope a = gaussian_pulse(2.0, 0.25);
  Envelope b = gaussian_pulse(2.0, 0.25, 0.0, 3.0);
  CHECK(energy(b) == doctest::Approx(9.0 * energy(a)));
  // Cross terms between distinct tones average out over a long window.
  Envelope c = make_comb(3, 4.9, square_pulse(10.0 / 4.9));
  CHECK(energy(c) == doctest::Approx(3.0 * 10.0 / 4.9).epsilon(1e-6));
}
