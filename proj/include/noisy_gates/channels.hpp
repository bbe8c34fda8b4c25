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

#include <span>
#include <vector>

#include "noisy_gates/circuit.hpp"
#include "noisy_gates/linalg.hpp"
#include "noisy_gates/noise_model.hpp"

namespace noisy_gates {

/// Operator-sum channel rho -> sum K rho K^dagger.
struct KrausChannel {
  std::vector<ComplexMatrix> operators;

  Eigen::Index dim() const { return operators.empty() ? 0 : operators.front().rows(); }
  /// max |sum K^dagger K - I|.
  double completeness_error() const;
};

KrausChannel identity_channel(Eigen::Index dim = 2);
/// {sqrt(1-p) I, sqrt(p) X}
KrausChannel bitflip_channel(double p);
/// {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}; Bloch contraction 1 - p.
KrausChannel depolarizing_channel(double p);
/// (1 - 15p/16) rho + p/16 sum_P P rho P over the 15 two-qubit Paulis.
KrausChannel depolarizing_channel_2q(double p);
/// Amplitude plus phase damping over dt:
/// {diag(1, sqrt(1-p1-pz)), sqrt(p1) sigma+, sqrt(pz) P1},
/// p1 = 1 - e^{-gamma1 dt}, pz = (1 - p1)(1 - e^{-gamma_pd dt}).
KrausChannel relaxation_channel(double gamma1, double gamma_pd, double dt);

/// Applies the channel to `qubits` of rho (first qubit most significant).
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel,
                            std::span<const int> qubits);
DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                            std::span<const int> qubits);

/// Applies the readout bit flip of each measured qubit.
DensityMatrix apply_readout_error(const DensityMatrix& rho, std::span<const int> measured,
                                  const DeviceParams& params);

struct ChannelSimResult {
  std::vector<DensityMatrix> layers;  // rho after each scheduled layer
  DensityMatrix readout;              // final rho after readout bit flips
};

/// Density-matrix baseline: each gate is its ideal unitary followed by the
/// depolarizing channel (gate error) and the relaxation channel (gate
/// duration) on its qubits; idles get relaxation only; measured qubits get a
/// bit flip before readout.
ChannelSimResult run_channel_sim(const ScheduledCircuit& circuit, const DeviceParams& params,
                                 std::size_t initial_basis = 0);

/// Single-gate step of the baseline, exposed for incremental evolution.
DensityMatrix apply_gate_with_channels(const DensityMatrix& rho, const GateSpec& gate,
                                       const DeviceParams& params);

}  // namespace noisy_gates
