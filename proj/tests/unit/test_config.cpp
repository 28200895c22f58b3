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

#include <doctest.h>

#include "mpx/config.hpp"
#include "mpx/errors.hpp"
#include "mpx/scenarios.hpp"

using namespace mpx;

TEST_CASE("quantities with units") {
  CHECK(parse_quantity("4.9 MHz", Dim::frequency) == 4.9);
  CHECK(parse_quantity("4900 kHz", Dim::frequency) == doctest::Approx(4.9));
  CHECK(parse_quantity("4.238 GHz", Dim::carrier) == 4.238);
  CHECK(parse_quantity("(44 ns)^-1", Dim::rate) == doctest::Approx(1.0 / 0.044));
  CHECK(parse_quantity("(3.8 us)^-1", Dim::rate) == doctest::Approx(1.0 / 3.8));
  CHECK(parse_quantity("22.7 1/us", Dim::rate) == 22.7);
  CHECK(parse_quantity("5 mV", Dim::voltage) == doctest::Approx(0.005));
  CHECK(parse_quantity("250 ns", Dim::time) == doctest::Approx(0.25));
  CHECK(parse_quantity("0.543 GHz/V", Dim::xi) == 0.543);
  CHECK(parse_quantity("1.45 1/(mV us)", Dim::mu) == 1.45);
  CHECK(parse_quantity("0.25", Dim::none) == 0.25);
  CHECK_THROWS_AS(parse_quantity("4.9", Dim::frequency), ConfigError);
  CHECK_THROWS_AS(parse_quantity("4.9 us", Dim::frequency), ConfigError);
  CHECK_THROWS_AS(parse_quantity("fast", Dim::time), ConfigError);
  CHECK_THROWS_AS(parse_quantity("1 MHz", Dim::none), ConfigError);
}

TEST_CASE("formatting round-trips every double") {
  for (double v : {0.1, 1.0 / 3.0, 1.0 / 0.044, 4.9, -0.08, 1e-7, 0.30000000000000004}) {
    CHECK(parse_quantity(format_quantity(v, Dim::frequency), Dim::frequency) == v);
    CHECK(parse_quantity(format_quantity(v, Dim::rate), Dim::rate) == v);
  }
  CHECK(format_quantity(4.9, Dim::frequency) == "4.9 MHz");
}

TEST_CASE("default configs survive serialize and parse") {
  for (const auto& name : scenario_names()) {
    ScenarioConfig c = default_config(name);
    CAPTURE(name);
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK_NOTHROW(validate_config(c));
  }
}

TEST_CASE("partial configs fill from the schema") {
  ScenarioConfig c = parse_config("scenario: ramsey-storage\nsettings:\n  beta: 1.2\n");
  CHECK(c.get("beta") == 1.2);
  CHECK(c.get("delta_f_s0") == 3.96);
  CHECK(c.option("shape") == "gaussian");
  CHECK(c.params == SystemParams{});
}

TEST_CASE("overrides, sweeps and presets") {
  ScenarioConfig c = parse_config("scenario: single-drive-decoherence\n",
                                  {"settings.beta=1.2", "params.chi_s_mp=5 MHz", "model.storage_loss=false",
                                   "sweep.delta_over_chi={start: 0, stop: 1, points: 3}"});
  CHECK(c.get("beta") == 1.2);
  CHECK(c.params.chi_s_mp == 5.0);
  CHECK_FALSE(c.model.storage_loss);
  CHECK(c.axis("delta_over_chi") == std::vector<double>{0.0, 0.5, 1.0});
  ScenarioConfig none = parse_config("scenario: qnd-check\nsweep:\n  Omega_over_chi: []\n");
  CHECK_FALSE(none.swept("Omega_over_chi"));
  CHECK(parse_config(serialize_config(none)) == none);
  ScenarioConfig fitted = parse_config("scenario: ramsey-storage\nparams:\n  preset: fitted\n");
  CHECK(fitted.params == fitted_params());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("scenario: nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("settings: {}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario: ramsey-storage\nsettings:\n  bogus: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario: ramsey-storage\nparams:\n  chi_s_mp: 4.9\n"), ConfigError);
  CHECK_THROWS_AS(validate_config(parse_config("scenario: ramsey-storage\noptions:\n  shape: triangle\n")), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario: ramsey-storage\n", {"settings.beta"}), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario: [\n"), ConfigError);
  ScenarioConfig c = default_config("wigner-snapshot");
  c.params.Gamma_1_s = -1.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("truncation must cover the photons probed plus six") {
  ScenarioConfig c = default_config("wigner-snapshot");
  c.settings["beta"] = 3.0;  // |beta|^2 = 9 needs 15 levels
  c.model.storage_dim = 14;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.model.storage_dim = 16;
  CHECK_NOTHROW(validate_config(c));
  ScenarioConfig m = default_config("photocount-multiplexed");
  m.model.storage_dim = 15;
  CHECK_THROWS_AS(validate_config(m), ConfigError);
}
