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

#include "noisy_gates/noise_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace noisy_gates {

using nlohmann::json;

double DeviceParams::duration_of(const GateSpec& gate) const {
  switch (gate.kind) {
    case GateKind::RZ:
      return 0.0;
    case GateKind::RX:
    case GateKind::X:
    case GateKind::SX:
      return gates.t_1q;
    case GateKind::CR:
    case GateKind::CNOT:
      return gates.t_2q;
    case GateKind::IDLE:
      return gate.duration;
  }
  return 0.0;
}

namespace {

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  if (!obj.is_object()) throw CalibrationError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw CalibrationError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& key : keys) {
    if (!obj.contains(key)) throw CalibrationError(where + ": missing field \"" + key + "\"");
  }
}

double number_field(const json& obj, const std::string& where, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw CalibrationError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw CalibrationError(where + "." + key + ": not finite");
  return x;
}

}  // namespace

void validate(const DeviceParams& params) {
  if (params.qubits.empty()) throw CalibrationError("qubits: at least one qubit required");
  for (std::size_t i = 0; i < params.qubits.size(); ++i) {
    const auto& q = params.qubits[i];
    const std::string where = "qubits[" + std::to_string(i) + "]";
    if (!(q.t1 > 0.0)) throw CalibrationError(where + ".t1_s: must be > 0");
    if (!(q.t2 > 0.0)) throw CalibrationError(where + ".t2_s: must be > 0");
    if (q.t2 > 2.0 * q.t1) throw CalibrationError(where + ".t2_s: T2 exceeds 2·T1");
    if (!(q.p_readout >= 0.0 && q.p_readout < 0.5)) {
      throw CalibrationError(where + ".p_readout: must lie in [0, 0.5)");
    }
  }
  const auto& g = params.gates;
  if (!(g.t_1q > 0.0)) throw CalibrationError("gates.t_1q_s: must be > 0");
  if (!(g.t_2q > 0.0)) throw CalibrationError("gates.t_2q_s: must be > 0");
  if (!(g.p_1q >= 0.0 && g.p_1q < 1.0)) throw CalibrationError("gates.p_1q: must lie in [0, 1)");
  if (!(g.p_2q >= 0.0 && g.p_2q < 1.0)) throw CalibrationError("gates.p_2q: must lie in [0, 1)");
}

DeviceParams parse_calibration(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CalibrationError(std::string("calibration parse error: ") + e.what());
  }
  require_keys(doc, "calibration", {"qubits", "gates"});
  const json& qubits = doc.at("qubits");
  if (!qubits.is_array()) throw CalibrationError("qubits: expected an array");

  DeviceParams params;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const std::string where = "qubits[" + std::to_string(i) + "]";
    require_keys(qubits[i], where, {"t1_s", "t2_s", "p_readout"});
    params.qubits.push_back({number_field(qubits[i], where, "t1_s"),
                             number_field(qubits[i], where, "t2_s"),
                             number_field(qubits[i], where, "p_readout")});
  }
  const json& gates = doc.at("gates");
  require_keys(gates, "gates", {"t_1q_s", "t_2q_s", "p_1q", "p_2q"});
  params.gates = {number_field(gates, "gates", "t_1q_s"), number_field(gates, "gates", "t_2q_s"),
                  number_field(gates, "gates", "p_1q"), number_field(gates, "gates", "p_2q")};
  validate(params);
  return params;
}

DeviceParams load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CalibrationError("cannot open calibration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_calibration(buf.str());
}

std::string calibration_to_json(const DeviceParams& params) {
  json doc;
  doc["qubits"] = json::array();
  for (const auto& q : params.qubits) {
    doc["qubits"].push_back({{"t1_s", q.t1}, {"t2_s", q.t2}, {"p_readout", q.p_readout}});
  }
  doc["gates"] = {{"t_1q_s", params.gates.t_1q},
                  {"t_2q_s", params.gates.t_2q},
                  {"p_1q", params.gates.p_1q},
                  {"p_2q", params.gates.p_2q}};
  return doc.dump(2);
}

RelaxationRates relaxation_rates(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("relaxation_rates: times must be > 0");
  if (t2 > 2.0 * t1) throw std::invalid_argument("relaxation_rates: T2 exceeds 2·T1");
  // An infinite T1 means no relaxation at all.
  if (std::isinf(t1)) return {0.0, std::isinf(t2) ? 0.0 : 2.0 / t2};
  return {1.0 / t1, (2.0 * t1 - t2) / (t1 * t2)};
}

double depolarizing_rate(double p_gate, double duration) {
  if (!(p_gate >= 0.0 && p_gate < 1.0)) {
    throw std::invalid_argument("depolarizing_rate: p_gate must lie in [0, 1)");
  }
  if (!(duration > 0.0)) throw std::invalid_argument("depolarizing_rate: duration must be > 0");
  return -std::log1p(-p_gate) / (4.0 * duration);
}

double depolarizing_rate_2q(double p_gate, double duration) {
  if (!(p_gate >= 0.0 && p_gate < 1.0)) {
    throw std::invalid_argument("depolarizing_rate_2q: p_gate must lie in [0, 1)");
  }
  if (!(duration > 0.0)) throw std::invalid_argument("depolarizing_rate_2q: duration must be > 0");
  // Each non-identity Pauli component anticommutes with 8 of the 15 jumps.
  return -std::log1p(-p_gate) / (16.0 * duration);
}

double spam_strength(double p_readout) {
  if (!(p_readout >= 0.0 && p_readout < 0.5)) {
    throw std::invalid_argument("spam_strength: p_readout must lie in [0, 0.5)");
  }
  return -0.5 * std::log1p(-2.0 * p_readout);
}

LindbladTerm LindbladTerm::make(ComplexMatrix op, double rate, double duration) {
  if (rate < 0.0) throw std::invalid_argument("LindbladTerm: negative rate");
  return {std::move(op), rate, std::sqrt(rate * duration)};
}

bool NoiseContext::noiseless() const {
  for (const auto& t : terms) {
    if (t.epsilon > 0.0) return false;
  }
  return true;
}

std::vector<ComplexMatrix> two_qubit_paulis() {
  const ComplexMatrix single[4] = {pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  std::vector<ComplexMatrix> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      out.push_back(kron(single[a], single[b]));
    }
  }
  return out;
}

namespace {

void add_relaxation(NoiseContext& ctx, const QubitParams& q, const ComplexMatrix& left,
                    const ComplexMatrix& right) {
  const RelaxationRates r = relaxation_rates(q.t1, q.t2);
  ctx.terms.push_back(
      LindbladTerm::make(kron(kron(left, pauli::sigma_plus()), right), r.gamma1, ctx.gate_duration));
  ctx.terms.push_back(
      LindbladTerm::make(kron(kron(left, pauli::z()), right), r.gamma_pd / 4.0, ctx.gate_duration));
}

}  // namespace

NoiseContext noise_context_for_gate(const GateSpec& gate, const DeviceParams& params) {
  for (int q : gate.qubits) {
    if (q < 0 || q >= params.n_qubits()) {
      throw std::invalid_argument("noise_context_for_gate: qubit " + std::to_string(q) +
                                  " not in calibration");
    }
  }
  NoiseContext ctx;
  ctx.gate_duration = params.duration_of(gate);
  ctx.dim = Eigen::Index{1} << gate.qubits.size();
  if (gate.kind == GateKind::RZ || ctx.gate_duration <= 0.0) return ctx;

  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  if (gate.qubits.size() == 1) {
    add_relaxation(ctx, params.qubits[static_cast<std::size_t>(gate.qubits[0])], one, one);
    if (gate.kind != GateKind::IDLE) {
      const double gd = depolarizing_rate(params.gates.p_1q, ctx.gate_duration);
      for (const auto& p : {pauli::x(), pauli::y(), pauli::z()}) {
        ctx.terms.push_back(LindbladTerm::make(p, gd, ctx.gate_duration));
      }
    }
    return ctx;
  }

  const ComplexMatrix id2 = pauli::identity();
  add_relaxation(ctx, params.qubits[static_cast<std::size_t>(gate.qubits[0])], one, id2);
  add_relaxation(ctx, params.qubits[static_cast<std::size_t>(gate.qubits[1])], id2, one);
  const double gd2 = depolarizing_rate_2q(params.gates.p_2q, ctx.gate_duration);
  for (auto& p : two_qubit_paulis()) {
    ctx.terms.push_back(LindbladTerm::make(std::move(p), gd2, ctx.gate_duration));
  }
  return ctx;
}

}  // namespace noisy_gates
