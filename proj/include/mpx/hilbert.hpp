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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mpx {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Mode {
  std::string label;
  int dim = 2;
  bool operator==(const Mode&) const = default;
};

// Ordered tensor product of truncated modes. Kronecker order follows modes().
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Mode> modes);
  static HilbertSpace single(int dim, std::string label = "mode");

  const std::vector<Mode>& modes() const { return modes_; }
  int dim() const { return dim_; }
  int index_of(const std::string& label) const;
  int mode_dim(const std::string& label) const;
  bool has(const std::string& label) const;
  bool operator==(const HilbertSpace& o) const { return modes_ == o.modes_; }

 private:
  std::vector<Mode> modes_;
  int dim_ = 1;
};

class Operator {
 public:
  Operator(HilbertSpace space, Mat matrix);

  const HilbertSpace& space() const { return space_; }
  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  Operator adjoint() const { return {space_, m_.adjoint()}; }
  Operator operator*(const Operator& o) const;
  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(cplx s) const { return {space_, m_ * s}; }

 private:
  HilbertSpace space_;
  Mat m_;
};

struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double min_eigenvalue = -1e-7;
};

// Validated at construction; immutable afterwards.
class DensityMatrix {
 public:
  DensityMatrix(HilbertSpace space, Mat rho, StateTolerances tol = {});

  const HilbertSpace& space() const { return space_; }
  const Mat& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  cplx expect(const Operator& op) const;
  cplx expect(const Mat& op) const;

 private:
  HilbertSpace space_;
  Mat rho_;
};

double hermiticity_error(const Mat& m);
double min_eigenvalue(const Mat& rho);

Operator annihilation(int dim);
Operator creation(int dim);
Operator number(int dim);
Operator identity(int dim);
// Qubit basis is (|g>, |e>); sigma_z = diag(-1, +1).
Operator pauli_z();
Operator pauli_x();
Operator pauli_y();
Operator sigma_minus();
Operator sigma_plus();
Operator parity(int dim);

Operator embed(const Operator& op, const std::string& target_label, const HilbertSpace& space);
Operator displacement(cplx alpha, int dim);
// Same exponential without the truncation guard; used for tomography corners.
Mat displacement_unchecked(cplx alpha, int dim);

DensityMatrix coherent_state(cplx beta, int dim);
Vec coherent_amplitudes(cplx beta, int dim);
DensityMatrix thermal_state(double n_th, int dim);
DensityMatrix fock_state(int n, int dim);
// Product state in mode order.
DensityMatrix tensor(const HilbertSpace& space, const std::vector<Mat>& factors);

// Reduced state of one mode.
Mat partial_trace(const Mat& rho, const HilbertSpace& space, const std::string& keep);

}  // namespace mpx
