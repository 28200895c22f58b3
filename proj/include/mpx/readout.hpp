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

#include <vector>

#include "mpx/hilbert.hpp"

namespace mpx {

// 1 - Re(r) = Gamma_1 <sigma_y> / (2 pi Omega). Omega in MHz, Gamma_1 in 1/us.
std::vector<double> emission_coefficient(const std::vector<double>& sigma_y, double Gamma_1, double Omega);

// Two-level steady state under H/h = delta sigma_z/2 + Omega sigma_x/2 with decay Gamma_1 and coherence
// decay Gamma_2, read out in reflection.
cplx steady_state_reflection(double delta, double Omega, double Gamma_1, double Gamma_2);
// Reflection from a simulated <sigma_->: r = 1 - i Gamma_1 <sigma_-> / (pi Omega).
cplx reflection_from_sigma_minus(cplx sigma_minus, double Gamma_1, double Omega);

struct ChannelSignal {
  int k = 0;
  double value = 0.0;       // in-phase (cosine) projection
  double quadrature = 0.0;  // sine projection
  double t0 = 0.0, t1 = 0.0;
};

// (2/T) int y(t) cos(2 pi spacing k t) dt, halved for k = 0; trapezoid over samples in [t0, t1].
ChannelSignal demultiplex(const std::vector<double>& t, const std::vector<double>& y, int k, double spacing,
                          double t0, double t1);
std::vector<ChannelSignal> demultiplex_all(const std::vector<double>& t, const std::vector<double>& y, int channels,
                                           double spacing, double t0, double t1);

struct RabiParams {
  double A = 1.0;
  double xi = 0.543;    // GHz / V
  double V_mp = 0.005;  // V
  double Gamma_1 = 0.0;
  double Gamma_2 = 0.0;
  double t0 = 0.0;
  double phi = 0.0;
  double T = 1.0;  // us
  double r_ss = 0.0;
};

// Decay-corrected angular frequency; divisor 16 as printed, 4 for the textbook form.
double rabi_angular_frequency(const RabiParams& p, double divisor = 16.0);
// Re r(t) = r_ss + A cos(w (t - t0) + phi) exp(-(t - t0)/T).
double rabi_calibration_model(double t, const RabiParams& p, double divisor = 16.0);

struct RabiFit {
  double xi = 0.0;
  double xi_sigma = 0.0;
  RabiParams params;
  double residual = 0.0;
  Eigen::MatrixXd covariance;
};

// Fits A, xi, phi, T, r_ss with V_mp, Gamma_1, Gamma_2 and t0 held at the values in `fixed`.
RabiFit fit_rabi(const std::vector<double>& t, const std::vector<double>& re_r, const RabiParams& fixed,
                 double divisor = 16.0);

}  // namespace mpx
