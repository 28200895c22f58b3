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

#include "mpx/hilbert.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpx/errors.hpp"

namespace mpx {

HilbertSpace::HilbertSpace(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw DimensionError("hilbert space needs at least one mode");
  std::set<std::string> seen;
  dim_ = 1;
  for (const auto& m : modes_) {
    if (m.dim < 2) throw DimensionError(fmt::format("mode '{}' has dimension {} < 2", m.label, m.dim));
    if (!seen.insert(m.label).second) throw DimensionError(fmt::format("duplicate mode label '{}'", m.label));
    dim_ *= m.dim;
  }
}

HilbertSpace HilbertSpace::single(int dim, std::string label) {
  return HilbertSpace({Mode{std::move(label), dim}});
}

int HilbertSpace::index_of(const std::string& label) const {
  for (size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i].label == label) return static_cast<int>(i);
  throw DimensionError(fmt::format("unknown mode label '{}'", label));
}

int HilbertSpace::mode_dim(const std::string& label) const { return modes_[index_of(label)].dim; }

bool HilbertSpace::has(const std::string& label) const {
  for (const auto& m : modes_)
    if (m.label == label) return true;
  return false;
}

Operator::Operator(HilbertSpace space, Mat matrix) : space_(std::move(space)), m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || m_.rows() != space_.dim())
    throw DimensionError(fmt::format("operator is {}x{} but space dimension is {}", m_.rows(), m_.cols(),
                                     space_.dim()));
}

Operator Operator::operator*(const Operator& o) const {
  if (!(space_ == o.space_)) throw DimensionError("operator product across different spaces");
  return {space_, m_ * o.m_};
}

Operator Operator::operator+(const Operator& o) const {
  if (!(space_ == o.space_)) throw DimensionError("operator sum across different spaces");
  return {space_, m_ + o.m_};
}

Operator Operator::operator-(const Operator& o) const {
  if (!(space_ == o.space_)) throw DimensionError("operator difference across different spaces");
  return {space_, m_ - o.m_};
}

double hermiticity_error(const Mat& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double min_eigenvalue(const Mat& rho) {
  Mat h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(HilbertSpace space, Mat rho, StateTolerances tol)
    : space_(std::move(space)), rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() != space_.dim())
    throw DimensionError(fmt::format("density matrix is {}x{} but space dimension is {}", rho_.rows(),
                                     rho_.cols(), space_.dim()));
  double herm = hermiticity_error(rho_);
  if (herm > tol.hermiticity) throw InvalidStateError(fmt::format("density matrix not Hermitian ({:.3e})", herm));
  double tr_err = std::abs(rho_.trace() - cplx(1.0));
  if (tr_err > tol.trace) throw InvalidStateError(fmt::format("density matrix trace off by {:.3e}", tr_err));
  double lmin = min_eigenvalue(rho_);
  if (lmin < tol.min_eigenvalue)
    throw InvalidStateError(fmt::format("density matrix has eigenvalue {:.3e}", lmin));
}

cplx DensityMatrix::expect(const Operator& op) const {
  if (!(op.space() == space_)) throw DimensionError("expectation across different spaces");
  return expect(op.matrix());
}

cplx DensityMatrix::expect(const Mat& op) const { return (op * rho_).trace(); }

static void check_dim(int dim) {
  if (dim < 2) throw DimensionError(fmt::format("invalid dimension {}", dim));
}

Operator annihilation(int dim) {
  check_dim(dim);
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {HilbertSpace::single(dim), a};
}

Operator creation(int dim) { return annihilation(dim).adjoint(); }

Operator number(int dim) {
  check_dim(dim);
  Mat n = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  return {HilbertSpace::single(dim), n};
}

Operator identity(int dim) {
  check_dim(dim);
  return {HilbertSpace::single(dim), Mat::Identity(dim, dim)};
}

Operator pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return {HilbertSpace::single(2), m};
}

Operator sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  return {HilbertSpace::single(2), m};
}

Operator sigma_plus() { return sigma_minus().adjoint(); }

Operator pauli_x() { return sigma_minus() + sigma_plus(); }

// i(sigma_- - sigma_+), so that [sigma_x, sigma_y] = 2i sigma_z in this basis.
Operator pauli_y() { return (sigma_minus() - sigma_plus()) * cplx(0, 1); }

Operator parity(int dim) {
  check_dim(dim);
  Mat p = Mat::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return {HilbertSpace::single(dim), p};
}

Operator embed(const Operator& op, const std::string& target_label, const HilbertSpace& space) {
  int idx = space.index_of(target_label);
  const auto& modes = space.modes();
  if (op.dim() != modes[idx].dim)
    throw DimensionError(fmt::format("operator dimension {} does not match mode '{}' dimension {}", op.dim(),
                                     target_label, modes[idx].dim));
  int left = 1, right = 1;
  for (int i = 0; i < idx; ++i) left *= modes[i].dim;
  for (size_t i = idx + 1; i < modes.size(); ++i) right *= modes[i].dim;
  Mat m = Eigen::kroneckerProduct(Mat::Identity(left, left),
                                  Eigen::kroneckerProduct(op.matrix(), Mat::Identity(right, right)).eval());
  return {space, m};
}

Mat displacement_unchecked(cplx alpha, int dim) {
  check_dim(dim);
  Mat a = annihilation(dim).matrix();
  Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

Operator displacement(cplx alpha, int dim) {
  Mat d = displacement_unchecked(alpha, dim);
  if (std::norm(alpha) > dim / 4.0) {
    // Unitarity survives truncation; the real damage shows up as weight on the top level.
    double defect = (d.adjoint() * d - Mat::Identity(dim, dim)).norm();
    double leak = std::abs(d(dim - 1, 0));
    throw TruncationError(fmt::format("|alpha|^2 = {:.4g} exceeds dim/4 = {:.4g} (top-level amplitude {:.3e})",
                                      std::norm(alpha), dim / 4.0, leak),
                          defect);
  }
  return {HilbertSpace::single(dim), d};
}

Vec coherent_amplitudes(cplx beta, int dim) {
  check_dim(dim);
  Vec v(dim);
  v(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * beta / std::sqrt(static_cast<double>(n));
  return v;
}

DensityMatrix coherent_state(cplx beta, int dim) {
  if (std::norm(beta) > dim / 4.0) {
    Vec v = coherent_amplitudes(beta, dim);
    throw TruncationError(fmt::format("|beta|^2 = {:.4g} exceeds dim/4 = {:.4g}", std::norm(beta), dim / 4.0),
                          1.0 - v.squaredNorm());
  }
  Vec v = coherent_amplitudes(beta, dim);
  v /= v.norm();
  return {HilbertSpace::single(dim), v * v.adjoint()};
}

DensityMatrix thermal_state(double n_th, int dim) {
  check_dim(dim);
  if (n_th < 0) throw InvalidStateError(fmt::format("negative thermal occupation {}", n_th));
  Mat rho = Mat::Zero(dim, dim);
  double q = n_th / (1.0 + n_th);
  double w = 1.0, z = 0.0;
  for (int n = 0; n < dim; ++n) {
    rho(n, n) = w;
    z += w;
    w *= q;
  }
  rho /= z;
  return {HilbertSpace::single(dim), rho};
}

DensityMatrix fock_state(int n, int dim) {
  check_dim(dim);
  if (n < 0 || n >= dim) throw DimensionError(fmt::format("Fock index {} outside dimension {}", n, dim));
  Mat rho = Mat::Zero(dim, dim);
  rho(n, n) = 1.0;
  return {HilbertSpace::single(dim), rho};
}

DensityMatrix tensor(const HilbertSpace& space, const std::vector<Mat>& factors) {
  const auto& modes = space.modes();
  if (factors.size() != modes.size()) throw DimensionError("tensor: one factor per mode required");
  Mat acc = Mat::Identity(1, 1);
  for (size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].rows() != modes[i].dim)
      throw DimensionError(fmt::format("tensor: factor {} has dimension {}", i, factors[i].rows()));
    acc = Eigen::kroneckerProduct(acc, factors[i]).eval();
  }
  return {space, acc};
}

Mat partial_trace(const Mat& rho, const HilbertSpace& space, const std::string& keep) {
  int idx = space.index_of(keep);
  const auto& modes = space.modes();
  int d = modes[idx].dim;
  int left = 1, right = 1;
  for (int i = 0; i < idx; ++i) left *= modes[i].dim;
  for (size_t i = idx + 1; i < modes.size(); ++i) right *= modes[i].dim;
  Mat out = Mat::Zero(d, d);
  for (int l = 0; l < left; ++l)
    for (int r = 0; r < right; ++r)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) += rho((l * d + i) * right + r, (l * d + j) * right + r);
  return out;
}

}  // namespace mpx
