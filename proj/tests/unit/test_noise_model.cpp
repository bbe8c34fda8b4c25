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

#include <cmath>

#include "noisy_gates/lindblad.hpp"
#include "noisy_gates/noise_model.hpp"

namespace ng = noisy_gates;

namespace {

std::string doc(const std::string& qubit) {
  return R"({"qubits": [)" + qubit +
         R"(], "gates": {"t_1q_s": 3.5e-8, "t_2q_s": 3e-7, "p_1q": 5e-4, "p_2q": 0.05}})";
}

}  // namespace

TEST(NoiseModel, ParsesMinimalDocument) {
  const auto p = ng::parse_calibration(doc(R"({"t1_s": 100e-6, "t2_s": 100e-6, "p_readout": 0.01})"));
  ASSERT_EQ(p.n_qubits(), 1);
  EXPECT_DOUBLE_EQ(p.qubits[0].t1, 100e-6);
  EXPECT_DOUBLE_EQ(p.gates.t_2q, 3e-7);
  // Round trip.
  const auto q = ng::parse_calibration(ng::calibration_to_json(p));
  EXPECT_EQ(q.qubits[0].p_readout, p.qubits[0].p_readout);
  EXPECT_EQ(q.gates.p_2q, p.gates.p_2q);
}

TEST(NoiseModel, RejectsInconsistentDocuments) {
  try {
    ng::parse_calibration(doc(R"({"t1_s": 100e-6, "t2_s": 250e-6, "p_readout": 0.01})"));
    FAIL() << "expected CalibrationError";
  } catch (const ng::CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("T2 exceeds 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ng::parse_calibration(doc(R"({"t1_s": 100e-6, "t2_s": 80e-6})")), ng::CalibrationError);
  EXPECT_THROW(ng::parse_calibration(doc(R"({"t1_s": 1e-4, "t2_s": 8e-5, "p_readout": 0.01, "x": 1})")),
               ng::CalibrationError);
  EXPECT_THROW(ng::parse_calibration(doc(R"({"t1_s": -1, "t2_s": 8e-5, "p_readout": 0.01})")),
               ng::CalibrationError);
  EXPECT_THROW(ng::parse_calibration(doc(R"({"t1_s": 1e-4, "t2_s": 8e-5, "p_readout": 0.7})")),
               ng::CalibrationError);
  EXPECT_THROW(ng::parse_calibration("{not json"), ng::CalibrationError);
}

TEST(NoiseModel, RelaxationRates) {
  const auto a = ng::relaxation_rates(50e-6, 50e-6);
  EXPECT_NEAR(a.gamma_pd, 1.0 / 50e-6, 1e-6);
  EXPECT_EQ(ng::relaxation_rates(50e-6, 100e-6).gamma_pd, 0.0);
  const auto b = ng::relaxation_rates(100e-6, 80e-6);
  EXPECT_NEAR(b.gamma1, 1e4, 1e-8);
  EXPECT_NEAR(b.gamma_pd, 1.5e4, 1e-8);
}

TEST(NoiseModel, DepolarizingRate) {
  EXPECT_EQ(ng::depolarizing_rate(0.0, 1.0), 0.0);
  EXPECT_NEAR(ng::depolarizing_rate(1.0 - std::exp(-4.0), 1.0), 1.0, 1e-14);
}

// Oracle: RK4 Lindblad evolution of the Bloch vector under X, Y, Z jumps.
TEST(NoiseModel, DepolarizingRateGivesRequestedContraction) {
  const double p = 0.01, t = 35e-9;
  const double g = ng::depolarizing_rate(p, t);
  std::vector<ng::JumpTerm> terms{{ng::pauli::x(), g}, {ng::pauli::y(), g}, {ng::pauli::z(), g}};
  ng::DensityMatrix plus{1, ng::ComplexMatrix::Constant(2, 2, 0.5)};
  const auto out = ng::evolve_segment(plus, ng::ComplexMatrix::Zero(2, 2), terms, t, 1000);
  EXPECT_NEAR(2.0 * out.rho(0, 1).real(), 1.0 - p, 1e-6);
  const auto one = ng::evolve_segment(ng::DensityMatrix::basis(1, 1), ng::ComplexMatrix::Zero(2, 2),
                                      terms, t, 1000);
  EXPECT_NEAR(one.rho(1, 1).real() - one.rho(0, 0).real(), 1.0 - p, 1e-6);
}

TEST(NoiseModel, TwoQubitDepolarizingContraction) {
  const double p = 0.05, t = 3e-7;
  const double g = ng::depolarizing_rate_2q(p, t);
  std::vector<ng::JumpTerm> terms;
  for (const auto& P : ng::two_qubit_paulis()) terms.push_back({P, g});
  ASSERT_EQ(terms.size(), 15u);
  // Start from (I + ZZ)/4; the ZZ component must shrink by 1 - p.
  ng::ComplexMatrix rho = 0.25 * (ng::ComplexMatrix::Identity(4, 4) + ng::kron(ng::pauli::z(), ng::pauli::z()));
  const auto out = ng::evolve_segment({2, rho}, ng::ComplexMatrix::Zero(4, 4), terms, t, 1000);
  const double zz = (out.rho * ng::kron(ng::pauli::z(), ng::pauli::z())).trace().real();
  EXPECT_NEAR(zz, 1.0 - p, 1e-6);
}

TEST(NoiseModel, SpamStrength) {
  EXPECT_EQ(ng::spam_strength(0.0), 0.0);
  EXPECT_NEAR(ng::spam_strength(0.25), std::log(2.0) / 2.0, 1e-15);
  for (double p : {1e-4, 0.02, 0.3, 0.49}) {
    EXPECT_NEAR((1.0 - std::exp(-2.0 * ng::spam_strength(p))) / 2.0, p, 1e-12);
  }
}

TEST(NoiseModel, NoiseContexts) {
  ng::DeviceParams quiet;
  quiet.qubits = {{INFINITY, INFINITY, 0.0}};
  quiet.gates = {35e-9, 3e-7, 0.0, 0.0};
  EXPECT_TRUE(ng::noise_context_for_gate(ng::GateSpec::x(0), quiet).noiseless());

  ng::DeviceParams dev;
  dev.qubits = {{100e-6, 80e-6, 0.02}, {100e-6, 80e-6, 0.02}};
  dev.gates = {35e-9, 3e-7, 5e-4, 0.05};
  const auto x = ng::noise_context_for_gate(ng::GateSpec::x(0), dev);
  EXPECT_EQ(x.terms.size(), 5u);  // sigma+, Z, X, Y, Z
  EXPECT_DOUBLE_EQ(x.gate_duration, 35e-9);
  for (const auto& t : x.terms) EXPECT_NEAR(t.epsilon, std::sqrt(t.rate * 35e-9), 1e-15);
  const auto cr = ng::noise_context_for_gate(ng::GateSpec::cr(0, 1, M_PI), dev);
  EXPECT_EQ(cr.dim, 4);
  EXPECT_EQ(cr.terms.size(), 4u + 15u);
  EXPECT_TRUE(ng::noise_context_for_gate(ng::GateSpec::rz(0, 1.0), dev).terms.empty());
  EXPECT_EQ(ng::noise_context_for_gate(ng::GateSpec::idle(1, 1e-6), dev).terms.size(), 2u);
}
