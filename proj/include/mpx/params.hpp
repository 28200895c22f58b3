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

#pragma once

namespace mpx {

struct Calibration {
  double mu = 1.45;                 // (mV us)^-1
  double photons_per_volt = 85.9;   // V^-1, sqrt(n) per volt
  double xi = 0.543;                // GHz / V
  bool operator==(const Calibration&) const = default;
};

// Frequencies in GHz, dispersive shifts in MHz, rates in 1/us.
struct SystemParams {
  double f_ro = 7.138;
  double f_s = 4.558;
  double f_yn = 3.848;
  double f_mp = 4.238;

  double chi_s_yn = 1.42;
  double chi_s_mp = 4.9;
  double chi_ro_yn = 0.4;
  double chi_yn_yn = 160.0;
  double chi_mp_mp = 116.0;
  double chi_s_s = -0.02;
  double chi_s_s_yn = -0.003;
  double chi_s_s_mp = -0.08;

  double Gamma_ro = 1.0 / 0.04;
  double Gamma_1_s = 1.0 / 3.8;
  double Gamma_2_s = 1.0 / 2.0;
  double Gamma_1_yn = 1.0 / 20.0;
  double Gamma_2_yn = 1.0 / 27.0;
  double Gamma_1_mp = 1.0 / 0.044;
  double Gamma_2_mp = 1.0 / 0.088;

  double n_th_s = 0.03;
  Calibration calibration;

  bool operator==(const SystemParams&) const = default;

  // Pure dephasing Gamma_2 - Gamma_1/2; rounding noise below 1e-12 is clamped to zero.
  double Gamma_phi_s() const { return clamp(Gamma_2_s - 0.5 * Gamma_1_s); }
  double Gamma_phi_yn() const { return clamp(Gamma_2_yn - 0.5 * Gamma_1_yn); }
  double Gamma_phi_mp() const { return clamp(Gamma_2_mp - 0.5 * Gamma_1_mp); }

  void validate() const;

 private:
  static double clamp(double g) { return (g < 0 && g > -1e-12) ? 0.0 : g; }
};

// The table values before the photocounting fit (chi_s_yn = 1.4 MHz).
SystemParams table_params();
// Values after the photocounting fit.
SystemParams fitted_params();

}  // namespace mpx
