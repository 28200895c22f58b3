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

#include <functional>
#include <string>
#include <vector>

#include "mpx/hilbert.hpp"

namespace mpx {

using ResidualFn = std::function<void(const RVec& x, RVec& r)>;
using JacobianFn = std::function<void(const RVec& x, RMat& j)>;

struct LeastSquaresResult {
  RVec x;
  RMat covariance;  // scaled by residual variance
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt; forward differences when no Jacobian is given.
LeastSquaresResult least_squares(const ResidualFn& f, int n_residuals, const RVec& x0, const JacobianFn& jac = {});

struct SpectralPeak {
  double frequency = 0.0;  // MHz, signed
  cplx amplitude = 0.0;    // mean of z exp(-2 pi i f t)
};

// Largest peaks of the discrete-time Fourier transform of z, refined by parabolic interpolation.
std::vector<SpectralPeak> fourier_peaks(const std::vector<double>& t, const std::vector<cplx>& z, int count,
                                        double max_frequency = 0.0);

struct RamseyFit {
  double A = 0.0;
  double delta_f_s = 0.0;  // MHz
  double phi = 0.0;
  double Gamma_d_s = 0.0;  // 1/us
  double residual = 0.0;
  RVec sigma;  // one-sigma errors, same order as the fields above
};

struct TwoToneRamseyFit {
  double A = 0.0;
  double delta_f_s = 0.0;
  double nu = 0.0;
  double zeta = 0.0;
  double phi = 0.0;
  double psi_X = 0.0;
  double psi_P = 0.0;
  double Gamma_d_s = 0.0;
  double residual = 0.0;
};

void ramsey_model(const RamseyFit& f, const std::vector<double>& t, std::vector<double>& x, std::vector<double>& p);
void ramsey_two_tone_model(const TwoToneRamseyFit& f, const std::vector<double>& t, std::vector<double>& x,
                           std::vector<double>& p);

RamseyFit fit_ramsey(const std::vector<double>& x, const std::vector<double>& p, const std::vector<double>& t);
TwoToneRamseyFit fit_ramsey_two_tone(const std::vector<double>& x, const std::vector<double>& p,
                                     const std::vector<double>& t);

// 2 Re[(X + iP) exp(-2 pi i delta_f_s t)]
std::vector<double> rotating_frame_quadrature(const std::vector<double>& x, const std::vector<double>& p,
                                              const std::vector<double>& t, double delta_f_s);

struct ExpFit {
  double amplitude = 0.0;
  double rate = 0.0;  // 1/us
  double residual = 0.0;
};

// y = amplitude exp(-rate t), seeded by a log-linear regression.
ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y);

double wrap_angle(double a);

}  // namespace mpx
