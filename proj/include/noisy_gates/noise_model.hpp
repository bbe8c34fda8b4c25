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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_gates/gate_spec.hpp"
#include "noisy_gates/linalg.hpp"

namespace noisy_gates {

struct QubitParams {
  double t1 = 0.0;         // seconds
  double t2 = 0.0;         // seconds
  double p_readout = 0.0;  // probability
};

struct GateParams {
  double t_1q = 0.0;  // seconds
  double t_2q = 0.0;  // seconds
  double p_1q = 0.0;
  double p_2q = 0.0;
};

struct DeviceParams {
  std::vector<QubitParams> qubits;
  GateParams gates;

  int n_qubits() const { return static_cast<int>(qubits.size()); }
  /// Duration a gate takes on this device (RZ: 0, IDLE: its own duration).
  double duration_of(const GateSpec& gate) const;
};

/// Raised for malformed or physically inconsistent calibration documents.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the JSON calibration format
///   {"qubits": [{"t1_s", "t2_s", "p_readout"}], "gates": {"t_1q_s", "t_2q_s", "p_1q", "p_2q"}}.
/// Unknown keys and missing fields are errors; T2 > 2 T1 is rejected.
DeviceParams parse_calibration(std::string_view json_text);
DeviceParams load_calibration(const std::filesystem::path& path);
std::string calibration_to_json(const DeviceParams& params);
void validate(const DeviceParams& params);

struct RelaxationRates {
  double gamma1 = 0.0;    // 1/s
  double gamma_pd = 0.0;  // 1/s
};

/// gamma1 = 1/T1, gamma_pd = 1/T_pd with T_pd = T1 T2 / (2 T1 - T2).
RelaxationRates relaxation_rates(double t1, double t2);

/// Rate for each of the X, Y, Z jumps such that one gate of `duration`
/// contracts the Bloch vector by exactly (1 - p_gate).
double depolarizing_rate(double p_gate, double duration);

/// Per-Pauli rate for the 15 two-qubit Pauli jumps giving Pauli-component
/// contraction (1 - p_gate) over `duration`.
double depolarizing_rate_2q(double p_gate, double duration);

/// Variance scale v of the SPAM gate whose average is a bit flip with
/// probability p_readout: p = (1 - exp(-2 v)) / 2.
double spam_strength(double p_readout);

struct LindbladTerm {
  ComplexMatrix op;
  double rate = 0.0;     // 1/s
  double epsilon = 0.0;  // sqrt(rate * duration)

  static LindbladTerm make(ComplexMatrix op, double rate, double duration);
};

/// Jump operators acting on a gate's own qubits (local dimension 2 or 4).
struct NoiseContext {
  std::vector<LindbladTerm> terms;
  double gate_duration = 0.0;
  Eigen::Index dim = 2;

  bool noiseless() const;
};

/// Relaxation (sigma+ at gamma1, Z at gamma_pd/4) for each gate qubit plus
/// depolarizing jumps: X, Y, Z for one-qubit gates, the 15 non-identity
/// Pauli pairs for two-qubit gates. IDLE gets relaxation only; RZ is empty.
NoiseContext noise_context_for_gate(const GateSpec& gate, const DeviceParams& params);

/// The 15 non-identity two-qubit Paulis in lexicographic order (IX ... ZZ).
std::vector<ComplexMatrix> two_qubit_paulis();

}  // namespace noisy_gates
