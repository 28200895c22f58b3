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

#include <Eigen/Sparse>

#include "mpx/hilbert.hpp"

namespace mpx {

using SpMat = Eigen::SparseMatrix<cplx>;
using CoeffFn = std::function<cplx(double)>;

// Contributes coeff(t) * op + conj(coeff(t)) * op^dagger to H/h (MHz).
struct DriveTerm {
  std::string name;
  Mat op;
  CoeffFn coeff;
};

struct Dissipator {
  std::string name;
  Mat op;
  double rate = 0.0;  // 1/us
};

// rho' = -i 2pi [H/h, rho] + sum rate (c rho c^+ - {c^+ c, rho}/2)
struct MasterEquation {
  HilbertSpace space;
  Mat h0;
  std::vector<DriveTerm> drives;
  std::vector<Dissipator> dissipators;
  // Times where the drive has kinks or jumps; the integrator lands on them exactly.
  std::vector<double> breakpoints;

  Mat hamiltonian(double t) const;
  void validate() const;
};

enum class Method { rk4, dopri5 };

struct Observable {
  std::string name;
  Mat op;
};

struct SolverConfig {
  Method method = Method::dopri5;
  double dt = 1e-3;      // rk4 step, us
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.0;  // 0 means unbounded
  double trace_limit = 1e-6;
  std::vector<double> times;           // output grid, us
  std::vector<double> snapshot_times;  // subset or extra times where rho is stored
  std::vector<Observable> observables;
  // Called at every output time with the current state.
  std::function<void(double, const Mat&)> on_output;
  void validate() const;
};

struct SolverStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_snapshot_eigenvalue = 1.0;
};

void merge(SolverStats& into, const SolverStats& s);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<cplx>> values;  // values[observable][time]
  std::vector<double> snapshot_times;
  std::vector<Mat> snapshots;
  Mat final_state;
  SolverStats stats;

  const std::vector<cplx>& operator[](const std::string& name) const;
  std::vector<double> real(const std::string& name) const;
};

Trajectory evolve(const DensityMatrix& rho0, const MasterEquation& meq, const SolverConfig& config);
Trajectory evolve(const Mat& rho0, const MasterEquation& meq, const SolverConfig& config);

std::vector<double> linspace(double a, double b, int n);

}  // namespace mpx
