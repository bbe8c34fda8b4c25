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

#include "noisy_gates/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace noisy_gates {

using nlohmann::json;

namespace {

void validate_gate(const GateSpec& g, int n_qubits, std::size_t index) {
  const std::string where = "ops[" + std::to_string(index) + "]";
  if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) {
    throw CircuitError(where + ": " + std::string(gate_name(g.kind)) + " acts on " +
                       std::to_string(gate_arity(g.kind)) + " qubit(s)");
  }
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] < 0 || g.qubits[i] >= n_qubits) {
      throw CircuitError(where + ": qubit index " + std::to_string(g.qubits[i]) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.qubits[i] == g.qubits[j]) throw CircuitError(where + ": qubit collision");
    }
  }
  if (!std::isfinite(g.theta) || !std::isfinite(g.phi)) {
    throw CircuitError(where + ": angles must be finite");
  }
  if (g.kind == GateKind::IDLE && !(g.duration > 0.0)) {
    throw CircuitError(where + ": IDLE needs a positive duration_s");
  }
}

}  // namespace

std::vector<Layer> pack_layers(int n_qubits, const std::vector<GateSpec>& ops) {
  // Each gate goes into the first layer after the last layer touching any of
  // its qubits.
  std::vector<int> frontier(static_cast<std::size_t>(n_qubits), 0);
  std::vector<Layer> layers;
  for (const auto& g : ops) {
    int slot = 0;
    for (int q : g.qubits) slot = std::max(slot, frontier[static_cast<std::size_t>(q)]);
    if (slot >= static_cast<int>(layers.size())) layers.resize(static_cast<std::size_t>(slot) + 1);
    layers[static_cast<std::size_t>(slot)].push_back(g);
    for (int q : g.qubits) frontier[static_cast<std::size_t>(q)] = slot + 1;
  }
  return layers;
}

Circuit make_circuit(int n_qubits, std::vector<GateSpec> ops, std::vector<int> measured) {
  if (n_qubits < 1 || n_qubits > 24) {
    throw CircuitError("n_qubits must lie in 1..24, got " + std::to_string(n_qubits));
  }
  for (std::size_t i = 0; i < ops.size(); ++i) validate_gate(ops[i], n_qubits, i);
  std::set<int> seen;
  for (int q : measured) {
    if (q < 0 || q >= n_qubits) throw CircuitError("measure: qubit index out of range");
    if (!seen.insert(q).second) throw CircuitError("measure: duplicate qubit");
  }
  Circuit c;
  c.n_qubits = n_qubits;
  c.layers = pack_layers(n_qubits, ops);
  c.ops = std::move(ops);
  c.measured = std::move(measured);
  return c;
}

namespace {

double angle_field(const json& op, const char* key, const std::string& where) {
  if (!op.contains(key)) {
    throw CircuitError(where + ": missing \"" + key + "\" for " + op.at("gate").get<std::string>());
  }
  if (!op.at(key).is_number()) throw CircuitError(where + "." + key + ": expected a number");
  return op.at(key).get<double>();
}

GateSpec parse_op(const json& op, std::size_t index) {
  const std::string where = "ops[" + std::to_string(index) + "]";
  if (!op.is_object()) throw CircuitError(where + ": expected an object");
  static const std::set<std::string> kKeys = {"gate", "q", "theta", "phi", "duration_s"};
  for (const auto& [key, value] : op.items()) {
    if (!kKeys.contains(key)) throw CircuitError(where + ": unknown key \"" + key + "\"");
  }
  if (!op.contains("gate") || !op.at("gate").is_string()) {
    throw CircuitError(where + ": missing gate name");
  }
  if (!op.contains("q") || !op.at("q").is_array()) throw CircuitError(where + ": missing qubit list");

  GateSpec g;
  try {
    g.kind = gate_kind_from_name(op.at("gate").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw CircuitError(where + ": " + e.what());
  }
  for (const auto& q : op.at("q")) {
    if (!q.is_number_integer()) throw CircuitError(where + ".q: expected integers");
    g.qubits.push_back(q.get<int>());
  }

  std::set<std::string> allowed;
  switch (g.kind) {
    case GateKind::RZ:
      g.phi = angle_field(op, "phi", where);
      allowed = {"phi"};
      break;
    case GateKind::RX:
    case GateKind::CR:
      g.theta = angle_field(op, "theta", where);
      g.phi = op.contains("phi") ? angle_field(op, "phi", where) : 0.0;
      allowed = {"theta", "phi"};
      break;
    case GateKind::X:
      g.theta = std::numbers::pi;
      break;
    case GateKind::SX:
      g.theta = std::numbers::pi / 2;
      break;
    case GateKind::CNOT:
      break;
    case GateKind::IDLE:
      g.duration = angle_field(op, "duration_s", where);
      allowed = {"duration_s"};
      break;
  }
  for (const char* key : {"theta", "phi", "duration_s"}) {
    if (op.contains(key) && !allowed.contains(key)) {
      throw CircuitError(where + ": \"" + key + "\" is not a parameter of " +
                         std::string(gate_name(g.kind)));
    }
  }
  return g;
}

}  // namespace

Circuit parse_circuit(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CircuitError(std::string("circuit parse error: ") + e.what());
  }
  if (!doc.is_object()) throw CircuitError("circuit: expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "n_qubits" && key != "ops" && key != "measure") {
      throw CircuitError("circuit: unknown key \"" + key + "\"");
    }
  }
  if (!doc.contains("n_qubits") || !doc.at("n_qubits").is_number_integer()) {
    throw CircuitError("circuit: missing integer n_qubits");
  }
  if (!doc.contains("ops") || !doc.at("ops").is_array()) throw CircuitError("circuit: missing ops");
  std::vector<GateSpec> ops;
  for (std::size_t i = 0; i < doc.at("ops").size(); ++i) ops.push_back(parse_op(doc.at("ops")[i], i));
  std::vector<int> measured;
  if (doc.contains("measure")) {
    if (!doc.at("measure").is_array()) throw CircuitError("measure: expected an array");
    for (const auto& q : doc.at("measure")) {
      if (!q.is_number_integer()) throw CircuitError("measure: expected integers");
      measured.push_back(q.get<int>());
    }
  }
  return make_circuit(doc.at("n_qubits").get<int>(), std::move(ops), std::move(measured));
}

Circuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open circuit file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

std::string circuit_to_json(const Circuit& circuit) {
  json doc;
  doc["n_qubits"] = circuit.n_qubits;
  doc["ops"] = json::array();
  for (const auto& g : circuit.ops) {
    json op = {{"gate", std::string(gate_name(g.kind))}, {"q", g.qubits}};
    switch (g.kind) {
      case GateKind::RZ: op["phi"] = g.phi; break;
      case GateKind::RX:
      case GateKind::CR:
        op["theta"] = g.theta;
        op["phi"] = g.phi;
        break;
      case GateKind::IDLE: op["duration_s"] = g.duration; break;
      default: break;
    }
    doc["ops"].push_back(op);
  }
  doc["measure"] = circuit.measured;
  return doc.dump(2);
}

CnotMode cnot_mode_from_name(std::string_view name) {
  if (name == "direct") return CnotMode::Direct;
  if (name == "decomposed") return CnotMode::Decomposed;
  throw std::invalid_argument("unknown CNOT mode \"" + std::string(name) + "\"");
}

std::string_view cnot_mode_name(CnotMode mode) {
  return mode == CnotMode::Direct ? "direct" : "decomposed";
}

std::vector<GateSpec> decompose_cnot(const GateSpec& cnot) {
  if (cnot.kind != GateKind::CNOT) throw std::invalid_argument("decompose_cnot: not a CNOT");
  using std::numbers::pi;
  const int c = cnot.qubits.at(0);
  const int t = cnot.qubits.at(1);
  // CR(pi/2) = block-diag(RX(pi/2), RX(-pi/2)); RX(-pi/2) on the target turns
  // it into block-diag(I, iX), and RZ(-pi/2) on the control removes the i.
  return {GateSpec::cr(c, t, pi / 2), GateSpec::rz(t, pi), GateSpec::sx(t), GateSpec::rz(t, pi),
          GateSpec::rz(c, -pi / 2)};
}

ScheduledCircuit schedule_layers(const Circuit& circuit, const DeviceParams& params,
                                 CnotMode mode) {
  if (params.n_qubits() < circuit.n_qubits) {
    throw CircuitError("calibration covers " + std::to_string(params.n_qubits()) +
                       " qubits, circuit needs " + std::to_string(circuit.n_qubits));
  }
  std::vector<Layer> layers = circuit.layers;
  if (mode == CnotMode::Decomposed) {
    std::vector<GateSpec> expanded;
    for (const auto& g : circuit.ops) {
      if (g.kind == GateKind::CNOT) {
        for (auto& part : decompose_cnot(g)) expanded.push_back(std::move(part));
      } else {
        expanded.push_back(g);
      }
    }
    layers = pack_layers(circuit.n_qubits, expanded);
  }

  ScheduledCircuit out;
  out.n_qubits = circuit.n_qubits;
  out.measured = circuit.measured;
  for (const auto& layer : layers) {
    ScheduledLayer sl;
    std::vector<double> busy(static_cast<std::size_t>(circuit.n_qubits), 0.0);
    for (GateSpec g : layer) {
      g.duration = params.duration_of(g);
      sl.duration = std::max(sl.duration, g.duration);
      for (int q : g.qubits) busy[static_cast<std::size_t>(q)] = g.duration;
      sl.gates.push_back(std::move(g));
    }
    if (sl.duration > 0.0) {
      for (int q = 0; q < circuit.n_qubits; ++q) {
        const double gap = sl.duration - busy[static_cast<std::size_t>(q)];
        if (gap > 1e-9 * sl.duration) sl.gates.push_back(GateSpec::idle(q, gap));
      }
    }
    out.layers.push_back(std::move(sl));
  }
  return out;
}

}  // namespace noisy_gates
