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

#include "noisy_gates/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace noisy_gates {

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  if (n_qubits < 1 || n_qubits > 24) {
    throw std::invalid_argument("state vector needs 1..24 qubits, got " + std::to_string(n_qubits));
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  StateVector s{n_qubits, ComplexVector::Zero(static_cast<Eigen::Index>(dim))};
  s.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

DensityMatrix DensityMatrix::basis(int n_qubits, std::size_t index) {
  return from_state(StateVector::basis(n_qubits, index));
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  return {psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint()};
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) d[static_cast<std::size_t>(i)] = rho(i, i).real();
  return d;
}

namespace pauli {
ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
ComplexMatrix sigma_plus() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}
ComplexMatrix sigma_minus() { return sigma_plus().adjoint(); }
ComplexMatrix projector_one() {
  ComplexMatrix m(2, 2);
  m << 0, 0, 0, 1;
  return m;
}
}  // namespace pauli

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch " + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()));
  }
  return a * b;
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

namespace {

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

void require_finite_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("expm: non-finite input");
}

}  // namespace

ComplexMatrix expm_pade(const ComplexMatrix& m) {
  require_finite_square(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const ComplexMatrix a = m / std::ldexp(1.0, squarings);

  const auto& b = kPade13;
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * ident;
  const ComplexMatrix u = a * u_inner;
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                          b[2] * a2 + b[0] * ident;
  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

ComplexMatrix expm_2x2(const ComplexMatrix& m) {
  require_finite_square(m);
  if (m.rows() != 2) throw std::invalid_argument("expm_2x2: matrix must be 2x2");
  const Complex mu = 0.5 * (m(0, 0) + m(1, 1));
  const Complex b00 = m(0, 0) - mu;
  const Complex b01 = m(0, 1);
  const Complex b10 = m(1, 0);
  // B^2 = delta^2 * I for traceless B.
  const Complex delta2 = b00 * b00 + b01 * b10;
  Complex c;
  Complex sinhc;
  if (std::abs(delta2) < 1e-6) {
    c = 1.0 + delta2 / 2.0 + delta2 * delta2 / 24.0 + delta2 * delta2 * delta2 / 720.0;
    sinhc = 1.0 + delta2 / 6.0 + delta2 * delta2 / 120.0 + delta2 * delta2 * delta2 / 5040.0;
  } else {
    const Complex delta = std::sqrt(delta2);
    c = std::cosh(delta);
    sinhc = std::sinh(delta) / delta;
  }
  const Complex scale = std::exp(mu);
  ComplexMatrix out(2, 2);
  out(0, 0) = scale * (c + sinhc * b00);
  out(0, 1) = scale * sinhc * b01;
  out(1, 0) = scale * sinhc * b10;
  out(1, 1) = scale * (c - sinhc * b00);
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() == 2 && m.cols() == 2) return expm_2x2(m);
  return expm_pade(m);
}

void check_qubits(std::span<const int> qubits, int n_qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(qubits[i]) +
                                  " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (qubits[j] == qubits[i]) {
        throw std::invalid_argument("duplicate qubit index " + std::to_string(qubits[i]));
      }
    }
  }
}

namespace {

struct GateLayout {
  std::vector<std::size_t> offsets;
  std::size_t mask = 0;
};

GateLayout layout_for(std::span<const int> qubits, int n_qubits) {
  const std::size_t k = qubits.size();
  GateLayout layout;
  layout.offsets.assign(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    layout.mask |= std::size_t{1} << (n_qubits - 1 - qubits[j]);
  }
  for (std::size_t local = 0; local < layout.offsets.size(); ++local) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if ((local >> (k - 1 - j)) & 1U) off |= std::size_t{1} << (n_qubits - 1 - qubits[j]);
    }
    layout.offsets[local] = off;
  }
  return layout;
}

}  // namespace

void apply_gate_inplace(StateVector& state, const ComplexMatrix& gate,
                        std::span<const int> qubits) {
  check_qubits(qubits, state.n_qubits);
  const std::size_t local_dim = std::size_t{1} << qubits.size();
  if (gate.rows() != static_cast<Eigen::Index>(local_dim) || gate.cols() != gate.rows()) {
    throw std::invalid_argument("apply_gate: gate dimension does not match qubit count");
  }
  const GateLayout layout = layout_for(qubits, state.n_qubits);
  const std::size_t dim = static_cast<std::size_t>(state.amplitudes.size());
  Complex* amp = state.amplitudes.data();

  if (local_dim == 2) {
    const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    const std::size_t o1 = layout.offsets[1];
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & layout.mask) continue;
      const Complex a0 = amp[base];
      const Complex a1 = amp[base + o1];
      amp[base] = g00 * a0 + g01 * a1;
      amp[base + o1] = g10 * a0 + g11 * a1;
    }
    return;
  }

  std::vector<Complex> in(local_dim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & layout.mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) in[l] = amp[base + layout.offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) {
        acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      }
      amp[base + layout.offsets[r]] = acc;
    }
  }
}

StateVector apply_gate(const StateVector& state, const ComplexMatrix& gate,
                       std::span<const int> qubits) {
  StateVector out = state;
  apply_gate_inplace(out, gate, qubits);
  return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const int> qubits,
                             int n_qubits) {
  check_qubits(qubits, n_qubits);
  const std::size_t local_dim = std::size_t{1} << qubits.size();
  if (op.rows() != static_cast<Eigen::Index>(local_dim) || op.cols() != op.rows()) {
    throw std::invalid_argument("embed_operator: operator dimension does not match qubit count");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  const GateLayout layout = layout_for(qubits, n_qubits);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & layout.mask) continue;
    for (std::size_t r = 0; r < local_dim; ++r) {
      for (std::size_t c = 0; c < local_dim; ++c) {
        out(static_cast<Eigen::Index>(base + layout.offsets[r]),
            static_cast<Eigen::Index>(base + layout.offsets[c])) =
            op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

}  // namespace noisy_gates
