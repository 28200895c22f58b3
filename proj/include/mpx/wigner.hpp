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

#include "mpx/hilbert.hpp"

namespace mpx {

// alpha = x + i p with X = (a + a^dagger)/2 and P = (a - a^dagger)/(2i).
struct GridSpec {
  double x_max = 4.0;
  double p_max = 4.0;
  int nx = 81;
  int np = 81;
  bool operator==(const GridSpec&) const = default;
};

struct WignerGrid {
  std::vector<double> x;
  std::vector<double> p;
  RMat W;  // W(i, j) at (x[i], p[j])
  std::string note = "alpha = x + i p, X = (a + a^dagger)/2";
  bool extent_warning = false;

  double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
  double dp() const { return p.size() > 1 ? p[1] - p[0] : 0.0; }
};

std::vector<double> uniform_axis(double half_width, int n);

// <m|D(beta)|n> for 0 <= m, n < dim, exact (no truncation of the displacement).
Mat displacement_elements(cplx beta, int dim);

// W(alpha) = (2/pi) Tr(D^dagger rho D P) on a single-mode state.
WignerGrid wigner(const Mat& rho, const GridSpec& spec = {});
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& spec = {});

double hermite_psi(int n, double x);
// psi_0 .. psi_nmax at x.
RVec hermite_psi_all(int nmax, double x);

struct YQuadrature {
  double y_max = 10.0;
  int points = 201;
};

// W_{|n><m|}(x, p) = (1/pi) int dy exp(-2 i p y) psi_n(x + y/2) psi_m(x - y/2).
Mat wigner_map_nm(int n, int m, const std::vector<double>& x, const std::vector<double>& p,
                  const YQuadrature& q = {});
// All maps with n, m <= n_max; index n * (n_max + 1) + m.
std::vector<Mat> wigner_maps(int n_max, const std::vector<double>& x, const std::vector<double>& p,
                             const YQuadrature& q = {});

// 2-D trapezoid over the grid.
double integrate(const WignerGrid& g, const RMat& f);
cplx integrate(const WignerGrid& g, const Mat& f);

struct Reconstruction {
  Mat rho;  // symmetrized, trace renormalized
  double raw_trace = 0.0;
  double min_eigenvalue = 0.0;
};

// rho_nm = pi int W_rho conj(W_{|n><m|}) dx dp.
Reconstruction reconstruct_rho(const WignerGrid& w, int n_max, const YQuadrature& q = {});

enum class Moment { X, P, parity };
double expectation_from_wigner(const WignerGrid& w, Moment which);
// 2 sqrt(Var X Var P), which is n_th + 1/2 for a thermal state.
double thermal_spread(const WignerGrid& w);

struct ParityRamseyParams {
  double alpha2 = 0.0;   // |alpha|^2
  double chi_s_yn = 1.42;  // MHz
  double Gamma_2_yn = 1.0 / 27.0;
  double gamma = 0.0;       // 1/us per photon
  double chi_s_s_yn = 0.0;  // MHz
  bool kerr_shift = false;  // stretch the revival period by the first-order Kerr correction
};

double parity_ramsey_signal(double t, const ParityRamseyParams& p);
double revival_time(double delta_tau, double alpha2, double chi_s_s_yn);

// |rho_nm| / sqrt(rho_nn rho_mm); NaN when either population is below floor.
double normalized_coherence(const Mat& rho, int n, int m, double floor = 1e-6);

struct CoherenceReport {
  Mat rho;
  RMat normalized;  // NaN marks undefined pairs
  double mean = 0.0;
  int pairs = 0;
};

CoherenceReport coherence_report(const Mat& rho, int n_max = 4, double floor = 1e-6);
double mean_coherence(const Mat& rho, int n_max = 4, double floor = 1e-6);
double natural_decay_prediction(int n, int m, double Gamma_phi, double t);

}  // namespace mpx
