// Copyright 2026 The Noisy Gates Authors
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

#include <gtest/gtest.h>

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "noisy_gates/linalg.hpp"

namespace ng = noisy_gates;
using ng::ComplexMatrix;
using ng::kI;

namespace {

ComplexMatrix random_matrix(int dim, double scale, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = {n(gen), n(gen)};
  return m;
}

}  // namespace

TEST(Linalg, MatmulExamples) {
  const ComplexMatrix m = (ComplexMatrix(2, 2) << 1.0, 2.0, kI, -3.0).finished();
  EXPECT_LT(ng::max_abs(ng::matmul(ng::pauli::identity(), m) - m), 1e-15);
  EXPECT_LT(ng::max_abs(ng::matmul(ng::pauli::x(), ng::pauli::x()) - ng::pauli::identity()), 1e-15);
  EXPECT_LT(ng::max_abs(ng::matmul(ng::pauli::x(), ng::pauli::y()) - kI * ng::pauli::z()), 1e-15);
  EXPECT_THROW(ng::matmul(ng::pauli::x(), ng::pauli::identity(4)), std::invalid_argument);
}

TEST(Linalg, KronExamples) {
  const ComplexMatrix x = ng::pauli::x();
  const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  ComplexMatrix expected(4, 4);
  expected << x, zero, zero, x;
  EXPECT_LT(ng::max_abs(ng::kron(ng::pauli::identity(), x) - expected), 1e-15);
  expected << x, zero, zero, -x;
  EXPECT_LT(ng::max_abs(ng::kron(ng::pauli::z(), x) - expected), 1e-15);
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  EXPECT_LT(ng::max_abs(ng::kron(one, x) - x), 1e-15);
}

TEST(Linalg, ExpmExamples) {
  EXPECT_LT(ng::max_abs(ng::expm(ComplexMatrix::Zero(4, 4)) - ComplexMatrix::Identity(4, 4)), 1e-15);
  const ComplexMatrix rx = ng::expm(-kI * (M_PI / 2) * ng::pauli::x());
  EXPECT_LT(ng::max_abs(rx - (-kI * ng::pauli::x())), 1e-14);
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 0.3;
  d(1, 1) = -1.7;
  d(2, 2) = {0.2, 2.0};
  const ComplexMatrix e = ng::expm_pade(d);
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(e(i, i) - std::exp(d(i, i))), 1e-14);
  EXPECT_LT(ng::max_abs(e - ComplexMatrix(e.diagonal().asDiagonal())), 1e-15);
}

// Oracle: Eigen's unsupported MatrixExponential.
TEST(Linalg, ExpmMatchesEigenReference) {
  std::mt19937_64 gen(7);
  for (int dim : {2, 4, 8}) {
    for (double scale : {0.01, 0.5, 3.0}) {
      const ComplexMatrix m = random_matrix(dim, scale, gen);
      const ComplexMatrix ref = m.exp();
      const double tol = 1e-12 * std::max(1.0, ng::max_abs(ref));
      EXPECT_LT(ng::max_abs(ng::expm_pade(m) - ref), tol) << dim << " " << scale;
      EXPECT_LT(ng::max_abs(ng::expm(m) - ref), tol) << dim << " " << scale;
    }
  }
}

TEST(Linalg, Expm2x2ClosedFormAgreesWithPade) {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix m = random_matrix(2, 1.0, gen);
    EXPECT_LT(ng::max_abs(ng::expm_2x2(m) - ng::expm_pade(m)), 1e-12);
  }
  // Nilpotent edge case.
  EXPECT_LT(ng::max_abs(ng::expm_2x2(ng::pauli::sigma_plus()) -
                        (ng::pauli::identity() + ng::pauli::sigma_plus())),
            1e-15);
}

TEST(Linalg, ExpmRejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ng::expm_pade(m), std::invalid_argument);
}

TEST(Linalg, ApplyGateBigEndian) {
  const int q0[1] = {0};
  const auto s = ng::apply_gate(ng::StateVector::basis(2, 0), ng::pauli::x(), q0);
  EXPECT_LT(std::abs(s.amplitudes(2) - 1.0), 1e-15);  // |10>
  const auto same = ng::apply_gate(ng::StateVector::basis(2, 3), ng::pauli::identity(), q0);
  EXPECT_LT((same.amplitudes - ng::StateVector::basis(2, 3).amplitudes).norm(), 1e-15);

  ComplexMatrix cnot = ComplexMatrix::Identity(4, 4);
  cnot.block(2, 2, 2, 2) = ng::pauli::x();
  const int cq[2] = {0, 1};
  const auto t = ng::apply_gate(ng::StateVector::basis(2, 2), cnot, cq);
  EXPECT_LT(std::abs(t.amplitudes(3) - 1.0), 1e-15);  // |11>
  // Reversed qubit order makes q1 the control.
  const int rq[2] = {1, 0};
  const auto u = ng::apply_gate(ng::StateVector::basis(2, 1), cnot, rq);
  EXPECT_LT(std::abs(u.amplitudes(3) - 1.0), 1e-15);
}

TEST(Linalg, ApplyGateMatchesEmbeddedOperator) {
  std::mt19937_64 gen(3);
  ng::StateVector psi{3, ComplexMatrix(random_matrix(8, 1.0, gen).col(0))};
  const ComplexMatrix g = random_matrix(4, 1.0, gen);
  const int qs[2] = {2, 0};
  const auto a = ng::apply_gate(psi, g, qs);
  const ComplexMatrix full = ng::embed_operator(g, qs, 3);
  EXPECT_LT((a.amplitudes - full * psi.amplitudes).norm(), 1e-13);
}

TEST(Linalg, QubitValidation) {
  const int dup[2] = {1, 1};
  const int out[1] = {3};
  EXPECT_THROW(ng::check_qubits(dup, 2), std::invalid_argument);
  EXPECT_THROW(ng::check_qubits(out, 2), std::invalid_argument);
  EXPECT_THROW(ng::apply_gate(ng::StateVector::basis(2), ng::pauli::identity(4), out),
               std::invalid_argument);
}
