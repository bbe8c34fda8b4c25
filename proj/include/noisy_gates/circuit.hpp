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
#include "noisy_gates/noise_model.hpp"

namespace noisy_gates {

using Layer = std::vector<GateSpec>;

/// Gate sequence on n qubits with terminal measurements. `layers` is the
/// greedy as-soon-as-possible packing of `ops`; no qubit appears twice in a
/// layer.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateSpec> ops;
  std::vector<Layer> layers;
  std::vector<int> measured;
};

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates the ops and packs them into layers.
Circuit make_circuit(int n_qubits, std::vector<GateSpec> ops, std::vector<int> measured = {});

std::vector<Layer> pack_layers(int n_qubits, const std::vector<GateSpec>& ops);

/// JSON circuit format:
///   {"n_qubits": n, "ops": [{"gate": "X", "q": [0], "theta"?, "phi"?, "duration_s"?}],
///    "measure": [..]}
/// RX and CR require "theta"; IDLE requires "duration_s".
Circuit parse_circuit(std::string_view json_text);
Circuit load_circuit(const std::filesystem::path& path);
std::string circuit_to_json(const Circuit& circuit);

enum class CnotMode { Direct, Decomposed };

CnotMode cnot_mode_from_name(std::string_view name);
std::string_view cnot_mode_name(CnotMode mode);

/// CNOT(c, t) as native gates, in time order:
///   CR(pi/2)(c, t); RZ(pi) t; SX t; RZ(pi) t; RZ(-pi/2) c
/// The product of their ideal unitaries is exactly block-diag(I, X).
std::vector<GateSpec> decompose_cnot(const GateSpec& cnot);

struct ScheduledLayer {
  std::vector<GateSpec> gates;  // in application order, durations filled in
  double duration = 0.0;
};

struct ScheduledCircuit {
  int n_qubits = 0;
  std::vector<ScheduledLayer> layers;
  std::vector<int> measured;
};

/// Assigns device durations, sets each layer's duration to its longest gate,
/// and pads every qubit that is idle for part or all of a layer with an IDLE
/// gate carrying relaxation. With CnotMode::Decomposed, CNOTs are expanded
/// before packing.
ScheduledCircuit schedule_layers(const Circuit& circuit, const DeviceParams& params,
                                 CnotMode mode = CnotMode::Direct);

}  // namespace noisy_gates
