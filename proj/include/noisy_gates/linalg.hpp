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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace noisy_gates {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Pure state (or unnormalized trajectory state) on `n_qubits` qubits.
///
/// Basis labels are big-endian: qubit 0 is the most significant bit, so
/// amplitude index `k` has qubit `q` in bit `n_qubits - 1 - q`.
struct StateVector {
  int n_qubits = 0;
  ComplexVector amplitudes;

  static StateVector basis(int n_qubits, std::size_t index = 0);
  double squared_norm() const { return amplitudes.squaredNorm(); }
};

struct DensityMatrix {
  int n_qubits = 0;
  ComplexMatrix rho;

  static DensityMatrix basis(int n_qubits, std::size_t index = 0);
  static DensityMatrix from_state(const StateVector& psi);
  double trace() const { return rho.trace().real(); }
  std::vector<double> diagonal() const;
};

namespace pauli {
ComplexMatrix identity(int dim = 2);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
// sigma_plus = |0><1| lowers |1> to |0>; sigma_minus is its adjoint.
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix projector_one();
}  // namespace pauli

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m, double tol = 1e-10);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant. The scaling exponent is chosen so the scaled 1-norm is at
/// most 0.5. Throws std::invalid_argument on non-finite input.
ComplexMatrix expm_pade(const ComplexMatrix& m);

/// Closed form for 2x2 matrices via the traceless part; agrees with
/// expm_pade to ~1e-13.
ComplexMatrix expm_2x2(const ComplexMatrix& m);

/// Dispatches to the 2x2 closed form when possible.
ComplexMatrix expm(const ComplexMatrix& m);

/// Applies `gate` to the listed qubits. The first listed qubit is the most
/// significant bit of the gate's local index.
StateVector apply_gate(const StateVector& state, const ComplexMatrix& gate,
                       std::span<const int> qubits);
void apply_gate_inplace(StateVector& state, const ComplexMatrix& gate,
                        std::span<const int> qubits);

/// Full-register operator for `op` acting on `qubits` of an n-qubit register.
ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const int> qubits,
                             int n_qubits);

/// Throws std::invalid_argument for duplicate or out-of-range qubit indices.
void check_qubits(std::span<const int> qubits, int n_qubits);

}  // namespace noisy_gates
