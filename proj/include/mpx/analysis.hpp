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

#include <string>
#include <vector>

#include "mpx/fits.hpp"
#include "mpx/hamiltonians.hpp"

namespace mpx {

enum class DecoherenceForm {
  // Sum photon number in the drive block, difference in the storage-phase entries.
  split,
  // The same (n + m)/2 factor in both places.
  printed,
};

struct DecoherenceRate {
  double rate = 0.0;   // 1/us
  double shift = 0.0;  // MHz
};

DecoherenceRate decoherence_rate_theory(int n, int m, double delta, double Omega, double Gamma_1_mp,
                                        double chi_s_mp, DecoherenceForm form = DecoherenceForm::split);
Eigen::Matrix4cd decoherence_matrix(int n, int m, double delta, double Omega, double Gamma_1_mp, double chi_s_mp,
                                    DecoherenceForm form = DecoherenceForm::split);

// Storage alone under loss and dephasing, starting from |alpha0>, in the frame of the storage.
Mat coherent_decay_solution(cplx alpha0, double Gamma_1, double Gamma_phi, double t, int dim);

// Storage quadratures from a joint state.
cplx storage_amplitude(const Mat& rho, const HilbertSpace& space);  // <a> = <X> + i<P>

struct MidSweepConfig {
  SystemParams params;
  double beta = 1.55;
  double delta_f_s0 = 3.96;  // MHz
  std::vector<double> durations;  // us
  ModelOptions model;
  WindowShape shape = WindowShape::gaussian;
  double two_tone_threshold = 0.9;  // Omega / chi_s_mp
  SolverConfig solver;
  int workers = 1;
};

struct DephasingPoint {
  double Omega = 0.0;
  double Gamma_d_s = 0.0;
  double delta_f_s = 0.0;
  double residual = 0.0;
  std::string model;  // "single" or "two-tone"
  std::string error;  // empty on success
  std::vector<double> x, p;
  TwoToneRamseyFit two_tone;
};

// Storage state at the end of an H4 pulse of each duration. Square windows, and Omega = 0, share one run.
std::vector<Mat> mid_storage_states(const SystemParams& params, double Omega, double delta_f_s0, const Mat& storage_rho0,
                                    const std::vector<double>& durations, const ModelOptions& model,
                                    WindowShape shape, const SolverConfig& solver, int workers = 1,
                                    SolverStats* stats = nullptr);

// Ramsey quadratures at the end of a comb pulse for every duration.
void mid_quadratures(const MidSweepConfig& cfg, double Omega, std::vector<double>& x, std::vector<double>& p,
                     SolverStats* stats = nullptr);
std::vector<DephasingPoint> dephasing_sweep(const MidSweepConfig& cfg, const std::vector<double>& omegas,
                                           SolverStats* stats = nullptr);

// Index of the largest interior local maximum; -1 when the curve is monotone.
int interior_maximum(const std::vector<double>& y);
// Parabolic refinement of an extremum location on a sampled curve.
double refine_extremum(const std::vector<double>& x, const std::vector<double>& y, int i);

}  // namespace mpx
