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

#include "noisy_gates/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "noisy_gates/gates.hpp"

namespace noisy_gates {

double KrausChannel::completeness_error() const {
  if (operators.empty()) return INFINITY;
  ComplexMatrix sum = ComplexMatrix::Zero(dim(), dim());
  for (const auto& k : operators) sum += k.adjoint() * k;
  return max_abs(sum - ComplexMatrix::Identity(dim(), dim()));
}

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": p must lie in [0, 1]");
}

}  // namespace

KrausChannel identity_channel(Eigen::Index dim) { return {{ComplexMatrix::Identity(dim, dim)}}; }

KrausChannel bitflip_channel(double p) {
  check_probability(p, "bitflip_channel");
  return {{std::sqrt(1.0 - p) * pauli::identity(), std::sqrt(p) * pauli::x()}};
}

KrausChannel depolarizing_channel(double p) {
  check_probability(p, "depolarizing_channel");
  const double w = std::sqrt(p / 4.0);
  return {{std::sqrt(1.0 - 0.75 * p) * pauli::identity(), w * pauli::x(), w * pauli::y(),
           w * pauli::z()}};
}

KrausChannel depolarizing_channel_2q(double p) {
  check_probability(p, "depolarizing_channel_2q");
  KrausChannel ch;
  ch.operators.push_back(std::sqrt(1.0 - 15.0 * p / 16.0) * pauli::identity(4));
  const double w = std::sqrt(p / 16.0);
  for (const auto& pp : two_qubit_paulis()) ch.operators.push_back(w * pp);
  return ch;
}

KrausChannel relaxation_channel(double gamma1, double gamma_pd, double dt) {
  if (gamma1 < 0.0 || gamma_pd < 0.0 || dt < 0.0) {
    throw std::invalid_argument("relaxation_channel: rates and dt must be >= 0");
  }
  const double p1 = -std::expm1(-dt * gamma1);
  const double p_pd = -std::expm1(-dt * gamma_pd);
  const double pz = (1.0 - p1) * p_pd;
  ComplexMatrix k = ComplexMatrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = std::sqrt(std::max(0.0, 1.0 - p1 - pz));
  return {{k, std::sqrt(p1) * pauli::sigma_plus(), std::sqrt(pz) * pauli::projector_one()}};
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            std::span<const int> qubits) {
  if (channel.dim() != (Eigen::Index{1} << qubits.size())) {
    throw std::invalid_argument("apply_channel: channel dimension does not match qubit count");
  }
  DensityMatrix out{rho.n_qubits, ComplexMatrix::Zero(rho.rho.rows(), rho.rho.cols())};
  for (const auto& k : channel.operators) {
    const ComplexMatrix full = embed_operator(k, qubits, rho.n_qubits);
    out.rho.noalias() += full * rho.rho * full.adjoint();
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                            std::span<const int> qubits) {
  const ComplexMatrix full = embed_operator(u, qubits, rho.n_qubits);
  return {rho.n_qubits, full * rho.rho * full.adjoint()};
}

DensityMatrix apply_readout_error(const DensityMatrix& rho, std::span<const int> measured,
                                  const DeviceParams& params) {
  DensityMatrix out = rho;
  for (int q : measured) {
    const double p = params.qubits.at(static_cast<std::size_t>(q)).p_readout;
    if (p == 0.0) continue;
    const int qs[1] = {q};
    out = apply_channel(out, bitflip_channel(p), qs);
  }
  return out;
}

DensityMatrix apply_gate_with_channels(const DensityMatrix& rho, const GateSpec& gate,
                                       const DeviceParams& params) {
  DensityMatrix out = rho;
  if (gate.kind != GateKind::IDLE) out = apply_unitary(out, ideal_unitary(gate), gate.qubits);
  const double duration = params.duration_of(gate);
  if (gate.kind == GateKind::RZ || duration <= 0.0) return out;

  if (gate.kind != GateKind::IDLE) {
    if (gate.qubits.size() == 1) {
      out = apply_channel(out, depolarizing_channel(params.gates.p_1q), gate.qubits);
    } else {
      out = apply_channel(out, depolarizing_channel_2q(params.gates.p_2q), gate.qubits);
    }
  }
  for (int q : gate.qubits) {
    const QubitParams& qp = params.qubits.at(static_cast<std::size_t>(q));
    const RelaxationRates r = relaxation_rates(qp.t1, qp.t2);
    const int qs[1] = {q};
    out = apply_channel(out, relaxation_channel(r.gamma1, r.gamma_pd, duration), qs);
  }
  return out;
}

ChannelSimResult run_channel_sim(const ScheduledCircuit& circuit, const DeviceParams& params,
                                 std::size_t initial_basis) {
  if (circuit.n_qubits > 10) {
    throw std::invalid_argument("run_channel_sim: density-matrix baseline is capped at 10 qubits");
  }
  ChannelSimResult result;
  DensityMatrix rho = DensityMatrix::basis(circuit.n_qubits, initial_basis);
  result.layers.reserve(circuit.layers.size());
  for (const auto& layer : circuit.layers) {
    for (const auto& g : layer.gates) rho = apply_gate_with_channels(rho, g, params);
    rho.rho = 0.5 * (rho.rho + rho.rho.adjoint());
    result.layers.push_back(rho);
  }
  result.readout = apply_readout_error(rho, circuit.measured, params);
  return result;
}

}  // namespace noisy_gates
