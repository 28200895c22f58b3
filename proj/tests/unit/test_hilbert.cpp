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

#include "mpx/errors.hpp"
#include "mpx/hilbert.hpp"

using namespace mpx;

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("ladder operators act on Fock states") {
  const int d = 6;
  Mat a = annihilation(d).matrix();
  for (int n = 1; n < d; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(n)));
  CHECK((creation(d).matrix() - a.adjoint()).norm() == 0.0);
  Mat comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n < d - 1; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0));
  CHECK(comm(d - 1, d - 1).real() == doctest::Approx(1.0 - d));
  Mat num = number(d).matrix();
  CHECK((num - a.adjoint() * a).norm() < 1e-14);
}

TEST_CASE("qubit conventions") {
  Mat z = pauli_z().matrix();
  CHECK(z(0, 0).real() == -1.0);
  CHECK(z(1, 1).real() == 1.0);
  Mat sm = sigma_minus().matrix();
  // sigma_- |e> = |g>
  CHECK(sm(0, 1).real() == 1.0);
  CHECK(std::abs(sm(1, 0)) == 0.0);
  Mat x = pauli_x().matrix(), y = pauli_y().matrix();
  CHECK((x * y - y * x - cplx(0, 2) * z).norm() < 1e-14);
  CHECK((sm + sm.adjoint() - x).norm() < 1e-14);
}

TEST_CASE("embed follows mode order") {
  HilbertSpace sp({{"s", 3}, {"yn", 2}, {"mp", 2}});
  CHECK(sp.dim() == 12);
  Mat a = annihilation(3).matrix();
  Mat i2 = Mat::Identity(2, 2);
  Mat expect_a = kron(kron(a, i2), i2);
  CHECK((embed(annihilation(3), "s", sp).matrix() - expect_a).norm() < 1e-14);
  Mat expect_z = kron(kron(Mat::Identity(3, 3), i2), pauli_z().matrix());
  CHECK((embed(pauli_z(), "mp", sp).matrix() - expect_z).norm() < 1e-14);
  Mat as = embed(annihilation(3), "s", sp).matrix();
  Mat zy = embed(pauli_z(), "yn", sp).matrix();
  CHECK((as * zy - zy * as).norm() < 1e-14);
  CHECK_THROWS_AS(embed(annihilation(4), "s", sp), DimensionError);
  CHECK_THROWS_AS(embed(pauli_z(), "ro", sp), DimensionError);
  CHECK_THROWS_AS(HilbertSpace({{"s", 3}, {"s", 2}}), DimensionError);
}

TEST_CASE("displacement") {
  const int d = 30;
  CHECK((displacement(0.0, d).matrix() - Mat::Identity(d, d)).norm() < 1e-14);
  cplx al(0.8, -0.5);
  Mat prod = displacement(al, d).matrix() * displacement(-al, d).matrix();
  CHECK((prod.topLeftCorner(10, 10) - Mat::Identity(10, 10)).norm() < 1e-10);
  Vec col = displacement(al, d).matrix().col(0);
  for (int n = 0; n < 8; ++n) {
    cplx ref = std::exp(-0.5 * std::norm(al)) * std::pow(al, n) / std::sqrt(factorial(n));
    CHECK(std::abs(col(n) - ref) < 1e-10);
  }
  CHECK_THROWS_AS(displacement(3.0, 12), TruncationError);
}

TEST_CASE("coherent parity matches the Poisson sum") {
  const double beta = 1.0;
  DensityMatrix rho = coherent_state(beta, 30);
  double ref = 0.0;
  for (int n = 0; n < 60; ++n) ref += (n % 2 ? -1.0 : 1.0) * std::exp(-beta * beta) * std::pow(beta, 2 * n) / factorial(n);
  CHECK(rho.expect(parity(30)).real() == doctest::Approx(ref).epsilon(1e-10));
  CHECK(ref == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("thermal and Fock states") {
  DensityMatrix th = thermal_state(0.03, 15);
  CHECK(th.matrix()(0, 0).real() == doctest::Approx(1.0 / 1.03).epsilon(1e-12));
  CHECK(th.expect(number(15)).real() == doctest::Approx(0.03).epsilon(1e-9));
  DensityMatrix f = fock_state(3, 6);
  CHECK(f.expect(number(6)).real() == doctest::Approx(3.0));
  CHECK_THROWS_AS(fock_state(6, 6), DimensionError);
  CHECK_THROWS_AS(thermal_state(-0.1, 6), InvalidStateError);
}

TEST_CASE("density matrix validation") {
  HilbertSpace sp = HilbertSpace::single(2);
  Mat bad(2, 2);
  bad << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(DensityMatrix(sp, bad), InvalidStateError);
  Mat neg(2, 2);
  neg << 1.2, 0, 0, -0.2;
  CHECK_THROWS_AS(DensityMatrix(sp, neg), InvalidStateError);
  Mat tr(2, 2);
  tr << 0.6, 0, 0, 0.6;
  CHECK_THROWS_AS(DensityMatrix(sp, tr), InvalidStateError);
}

TEST_CASE("partial trace of a product state") {
  HilbertSpace sp({{"s", 5}, {"mp", 2}});
  Mat rs = coherent_state(cplx(0.4, 0.3), 5).matrix();
  Mat rq(2, 2);
  rq << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
  DensityMatrix rho = tensor(sp, {rs, rq});
  CHECK((partial_trace(rho.matrix(), sp, "s") - rs).norm() < 1e-14);
  CHECK((partial_trace(rho.matrix(), sp, "mp") - rq * rs.trace()).norm() < 1e-14);
  CHECK((rho.matrix() - kron(rs, rq)).norm() < 1e-14);
}
