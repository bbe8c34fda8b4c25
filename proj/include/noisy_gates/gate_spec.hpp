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

#include <string>
#include <string_view>
#include <vector>

namespace noisy_gates {

enum class GateKind { RZ, RX, X, SX, CR, CNOT, IDLE };

std::string_view gate_name(GateKind kind);
/// Throws std::invalid_argument for unknown names.
GateKind gate_kind_from_name(std::string_view name);
int gate_arity(GateKind kind);

/// A native gate on specific qubits. Angles are in radians, duration in
/// seconds. RZ is virtual: zero duration and never noisy. For CR and CNOT the
/// first qubit is the control.
struct GateSpec {
  GateKind kind = GateKind::IDLE;
  std::vector<int> qubits;
  double theta = 0.0;
  double phi = 0.0;
  double duration = 0.0;

  static GateSpec rz(int q, double phi);
  static GateSpec rx(int q, double theta, double phi = 0.0);
  static GateSpec x(int q);
  static GateSpec sx(int q);
  static GateSpec cr(int control, int target, double theta, double phi = 0.0);
  static GateSpec cnot(int control, int target);
  static GateSpec idle(int q, double duration);

  bool operator==(const GateSpec&) const = default;
};

/// Rotation angles implied by the gate kind (X -> (pi, 0), SX -> (pi/2, 0)).
double effective_theta(const GateSpec& gate);
double effective_phi(const GateSpec& gate);

}  // namespace noisy_gates
