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
#include <sstream>

#include "noisy_gates/channels.hpp"
#include "noisy_gates/circuit.hpp"
#include "noisy_gates/gates.hpp"
#include "noisy_gates/lindblad.hpp"

namespace ng = noisy_gates;
using ng::ComplexMatrix;
using ng::kI;

namespace {

const ComplexMatrix kZero2 = ComplexMatrix::Zero(2, 2);

std::vector<ng::JumpTerm> relaxation_terms(double g1, double gpd) {
  return {{ng::pauli::sigma_plus(), g1}, {ng::pauli::z(), gpd / 4.0}};
}

ng::DensityMatrix plus_state() { return {1, ComplexMatrix::Constant(2, 2, 0.5)}; }

}  // namespace

TEST(Lindblad, RhsExamples) {
  const auto rho = ng::DensityMatrix::basis(1, 0).rho;
  EXPECT_LT(ng::max_abs(ng::lindblad_rhs(rho, kZero2, {})), 1e-300);
  const double g = 0.7;
  const ComplexMatrix d = ng::lindblad_rhs(rho, kZero2, {{ng::pauli::x(), g}});
  ComplexMatrix expected = kZero2;
  expected(1, 1) = g;
  expected(0, 0) = -g;
  EXPECT_LT(ng::max_abs(d - expected), 1e-15);

  const ComplexMatrix h = 0.3 * ng::pauli::y() + 0.1 * ng::pauli::z();
  const ComplexMatrix r = ng::lindblad_rhs(plus_state().rho, h, relaxation_terms(2.0, 1.0));
  EXPECT_LT(std::abs(r.trace()), 1e-12);
}

TEST(Lindblad, RelaxationMatchesClosedForm) {
  const double g1 = 1e4, gpd = 1.5e4, t = 2e-5;
  const auto one = ng::evolve_segment(ng::DensityMatrix::basis(1, 1), kZero2, relaxation_terms(g1, gpd), t, 100);
  EXPECT_NEAR(one.rho(1, 1).real(), std::exp(-g1 * t), 1e-8);
  const auto coh = ng::evolve_segment(plus_state(), kZero2, relaxation_terms(g1, gpd), t, 100);
  EXPECT_NEAR(std::abs(coh.rho(0, 1)), 0.5 * std::exp(-(g1 + gpd) / 2.0 * t), 1e-8);
  // Kraus map agrees too.
  const auto kraus = ng::apply_channel(plus_state(), ng::relaxation_channel(g1, gpd, t), std::vector<int>{0});
  EXPECT_LT(ng::max_abs(kraus.rho - coh.rho), 1e-8);
}

TEST(Lindblad, UnitaryLimit) {
  const ComplexMatrix h = 1e7 * (0.4 * ng::pauli::x() + 0.9 * ng::pauli::y());
  const double t = 2e-7;
  const auto out = ng::evolve_segment(ng::DensityMatrix::basis(1, 0), h, {}, t, 1000);
  const ComplexMatrix u = ng::expm(-kI * h * t);
  EXPECT_LT(ng::max_abs(out.rho - u * ng::DensityMatrix::basis(1, 0).rho * u.adjoint()), 1e-8);
}

TEST(Lindblad, TraceAndHermiticityOverManySteps) {
  const ComplexMatrix h = 4.5e7 * ng::pauli::x();
  const auto out = ng::evolve_segment(ng::DensityMatrix::basis(1, 0), h, relaxation_terms(1e4, 1.5e4), 1e-5,
                                      10000);
  EXPECT_NEAR(out.trace(), 1.0, 1e-9);
  EXPECT_TRUE(ng::is_hermitian(out.rho, 1e-10));
}

TEST(Lindblad, FourthOrderConvergence) {
  const double g1 = 1.0, t = 2.0;
  std::vector<double> err;
  for (int steps : {10, 20, 40}) {
    const auto out = ng::evolve_segment(ng::DensityMatrix::basis(1, 1), kZero2, relaxation_terms(g1, 0.0), t, steps);
    err.push_back(std::abs(out.rho(1, 1).real() - std::exp(-g1 * t)));
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 3.7);
  EXPECT_GE(std::log2(err[1] / err[2]), 3.7);
}

TEST(Lindblad, SolveSeriesAndCsv) {
  ng::LindbladProblem p;
  p.initial = ng::DensityMatrix::basis(1, 1);
  p.terms = relaxation_terms(1.0, 0.0);
  p.segments = {{kZero2, 0.5}, {kZero2, 0.25}};
  const auto s = ng::solve(p, 0.01);
  ASSERT_EQ(s.states.size(), 3u);
  EXPECT_DOUBLE_EQ(s.times.back(), 0.75);
  EXPECT_NEAR(s.states.back().rho(1, 1).real(), std::exp(-0.75), 1e-10);
  std::ostringstream csv;
  ng::write_lindblad_csv(csv, s, true);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "time_s,p_0,p_1");
  EXPECT_THROW(ng::solve(p, 0.0), std::invalid_argument);
}

TEST(Lindblad, NonFiniteStateIsReported) {
  ComplexMatrix h = kZero2;
  h(0, 1) = h(1, 0) = 1e300;
  EXPECT_THROW(ng::evolve_segment(ng::DensityMatrix::basis(1, 0), h, {}, 1.0, 1), ng::LindbladError);
}

TEST(Lindblad, CircuitLayers) {
  ng::DeviceParams quiet;
  quiet.qubits = {{INFINITY, INFINITY, 0.0}, {INFINITY, INFINITY, 0.0}};
  quiet.gates = {35e-9, 3e-7, 0.0, 0.0};
  const auto empty = ng::lindblad_layers(ng::schedule_layers(ng::make_circuit(1, {}), quiet), quiet);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_LT(ng::max_abs(empty[0].rho - ng::DensityMatrix::basis(1, 0).rho), 1e-15);

  const auto bell = ng::lindblad_layers(
      ng::schedule_layers(ng::make_circuit(2, {ng::GateSpec::sx(0), ng::GateSpec::rz(0, M_PI / 2),
                                               ng::GateSpec::cnot(0, 1)}),
                          quiet),
      quiet);
  ng::StateVector psi = ng::StateVector::basis(2, 0);
  for (const auto& g : {ng::GateSpec::sx(0), ng::GateSpec::rz(0, M_PI / 2), ng::GateSpec::cnot(0, 1)})
    ng::apply_gate_inplace(psi, ng::ideal_unitary(g), g.qubits);
  EXPECT_LT(ng::max_abs(bell.back().rho - ng::DensityMatrix::from_state(psi).rho), 1e-8);
}

// The channel baseline and the master equation agree for an idle qubit.
TEST(Lindblad, IdleLayersMatchRelaxationChannel) {
  ng::DeviceParams dev;
  dev.qubits = {{100e-6, 80e-6, 0.0}};
  dev.gates = {35e-9, 3e-7, 0.0, 0.0};
  const auto circ = ng::make_circuit(1, {ng::GateSpec::idle(0, 5e-6), ng::GateSpec::idle(0, 2e-5)});
  const auto sched = ng::schedule_layers(circ, dev);
  const auto ref = ng::lindblad_layers(sched, dev, 1);
  const auto ch = ng::run_channel_sim(sched, dev, 1);
  ASSERT_EQ(ref.size(), 3u);
  EXPECT_LT(ng::max_abs(ref[1].rho - ch.layers[0].rho), 1e-8);
  EXPECT_LT(ng::max_abs(ref[2].rho - ch.layers[1].rho), 1e-8);
  EXPECT_NEAR(ref[2].rho(1, 1).real(), std::exp(-1e4 * 2.5e-5), 1e-8);
}
