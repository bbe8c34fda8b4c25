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
#include <numeric>

#include "noisy_gates/channels.hpp"
#include "noisy_gates/engine.hpp"
#include "noisy_gates/lindblad.hpp"

namespace ng = noisy_gates;

namespace {

ng::DeviceParams quiet(int n, double p_readout = 0.0) {
  ng::DeviceParams d;
  d.qubits.assign(static_cast<std::size_t>(n), {INFINITY, INFINITY, p_readout});
  d.gates = {35e-9, 3e-7, 0.0, 0.0};
  return d;
}

ng::DeviceParams desk(int n) {
  ng::DeviceParams d;
  d.qubits.assign(static_cast<std::size_t>(n), {100e-6, 80e-6, 0.02});
  d.gates = {35e-9, 3e-7, 5e-4, 0.05};
  return d;
}

ng::RunConfig config(int shots, std::uint64_t seed) {
  ng::RunConfig c;
  c.shots = shots;
  c.master_seed = seed;
  c.parallel = 1;
  return c;
}

}  // namespace

TEST(Engine, NoiselessXIsDeterministic) {
  const auto dev = quiet(1);
  const auto prepared = ng::prepare(ng::schedule_layers(ng::make_circuit(1, {ng::GateSpec::x(0)}, {0}), dev), dev);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto r = ng::run_trajectory(prepared, ng::RngStream(5, i));
    EXPECT_EQ(r.bitstring, 1u);
    EXPECT_NEAR(r.weight, 1.0, 1e-15);
    EXPECT_NEAR(std::norm(r.state.amplitudes(1)), 1.0, 1e-15);
  }
  const auto e = ng::run_shots(ng::make_circuit(1, {ng::GateSpec::x(0), ng::GateSpec::x(0), ng::GateSpec::x(0)}),
                               dev, config(50, 1));
  EXPECT_EQ(e.checkpoints.back().weight_mean, 1.0);
  EXPECT_EQ(e.checkpoints.back().weight_stderr, 0.0);
  EXPECT_NEAR(e.checkpoints.back().weighted[1], 1.0, 1e-15);
}

TEST(Engine, ZeroNoiseDecomposedCnot) {
  const auto dev = quiet(2);
  auto c = config(10, 2);
  c.cnot_mode = ng::CnotMode::Decomposed;
  c.initial_basis = 2;  // |10>
  const auto e = ng::run_shots(ng::make_circuit(2, {ng::GateSpec::cnot(0, 1)}, {0, 1}), dev, c);
  EXPECT_NEAR(e.checkpoints.back().weighted[3], 1.0, 1e-12);
  EXPECT_EQ(e.checkpoints.back().unweighted[3], 1.0);
}

TEST(Engine, ReadoutFrequency) {
  const auto dev = quiet(1, 0.25);
  const auto e = ng::run_shots(ng::make_circuit(1, {}, {0}), dev, config(10000, 3));
  const auto& cp = e.checkpoints.back();
  EXPECT_NEAR(cp.unweighted[1], 0.25, 0.01);
  EXPECT_NEAR(cp.weighted[1], 0.25, 0.01);
  EXPECT_NEAR(cp.weight_mean, 1.0, 1e-12);  // SPAM gates are unitary
}

TEST(Engine, WorkerCountDoesNotChangeResults) {
  const auto dev = desk(2);
  const auto circ = ng::make_circuit(2, {ng::GateSpec::sx(0), ng::GateSpec::cnot(0, 1), ng::GateSpec::x(1)}, {0, 1});
  const std::vector<std::size_t> cps{1, 2, 3};
  auto c = config(333, 77);
  const auto a = ng::run_shots(circ, dev, c, cps);
  c.parallel = 3;
  const auto b = ng::run_shots(circ, dev, c, cps);
  const auto again = ng::run_shots(circ, dev, c, cps);
  ASSERT_EQ(a.checkpoints.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(a.checkpoints[k].weighted, b.checkpoints[k].weighted);
    EXPECT_EQ(a.checkpoints[k].unweighted, b.checkpoints[k].unweighted);
    EXPECT_EQ(a.checkpoints[k].diag_stderr, b.checkpoints[k].diag_stderr);
    EXPECT_EQ(*a.checkpoints[k].rho, *b.checkpoints[k].rho);
    EXPECT_EQ(b.checkpoints[k].weighted, again.checkpoints[k].weighted);
    const auto& w = a.checkpoints[k].weighted;
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    const auto& u = a.checkpoints[k].unweighted;
    EXPECT_NEAR(std::accumulate(u.begin(), u.end(), 0.0), 1.0, 1e-12);
  }
  c.master_seed = 78;
  EXPECT_NE(ng::run_shots(circ, dev, c, cps).checkpoints[0].weighted, a.checkpoints[0].weighted);
}

// Oracle: the relaxation Kraus channel applied over the same idle time.
TEST(Engine, RelaxationOnlyIdleMatchesKraus) {
  ng::DeviceParams dev = desk(1);
  dev.qubits[0].p_readout = 0.0;
  const double t = 30e-6;
  auto c = config(100000, 9);
  c.initial_basis = 1;
  const auto e = ng::run_shots(ng::make_circuit(1, {ng::GateSpec::idle(0, t)}), dev, c);
  const auto& cp = e.checkpoints.back();
  const auto r = ng::relaxation_rates(100e-6, 80e-6);
  const auto ref = ng::apply_channel(ng::DensityMatrix::basis(1, 1), ng::relaxation_channel(r.gamma1, r.gamma_pd, t),
                                     std::vector<int>{0});
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_LE(std::abs((*cp.rho)(i, j) - ref.rho(i, j)), 5.0 * (*cp.rho_stderr)(i, j) + 1e-12);
    }
  }
  EXPECT_LE(std::abs(cp.weight_mean - 1.0), 3.0 * cp.weight_stderr);
}

// Oracle: the master equation for repeated X gates on one qubit.
TEST(Engine, RepeatedXMatchesLindblad) {
  ng::DeviceParams dev = desk(1);
  dev.qubits[0].p_readout = 0.0;
  dev.gates.p_1q = 5e-3;
  const auto circ = ng::make_circuit(1, std::vector<ng::GateSpec>(200, ng::GateSpec::x(0)));
  const auto sched = ng::schedule_layers(circ, dev);
  const auto ref = ng::lindblad_layers(sched, dev);
  std::vector<std::size_t> cps;
  for (std::size_t k = 20; k <= 200; k += 20) cps.push_back(k);
  const auto e = ng::run_shots(ng::prepare(sched, dev), config(10000, 4), cps);
  for (const auto& cp : e.checkpoints) {
    const double tol = std::max(3.0 * cp.diag_stderr[0], 0.01);
    EXPECT_NEAR(cp.diag_mean[0], ref[cp.layers].rho(0, 0).real(), tol) << cp.layers;
    EXPECT_NEAR(cp.weighted[0], ref[cp.layers].rho(0, 0).real(), tol) << cp.layers;
  }
}

TEST(Engine, DecomposedAndDirectCnotAgreeAtSmallNoise) {
  ng::DeviceParams dev = desk(2);
  dev.gates.p_2q = 5e-3;
  const auto circ = ng::make_circuit(2, {ng::GateSpec::sx(0), ng::GateSpec::cnot(0, 1)}, {0, 1});
  auto c = config(20000, 5);
  const auto direct = ng::run_shots(circ, dev, c).checkpoints.back();
  c.cnot_mode = ng::CnotMode::Decomposed;
  c.master_seed = 6;
  const auto dec = ng::run_shots(circ, dev, c).checkpoints.back();
  for (std::size_t x = 0; x < 4; ++x) {
    const double se = std::hypot(direct.diag_stderr[x], dec.diag_stderr[x]);
    EXPECT_NEAR(direct.diag_mean[x], dec.diag_mean[x], std::max(5.0 * se, 0.01)) << x;
  }
}

TEST(Engine, SubstepModeAgreesWithExactSampling) {
  ng::DeviceParams dev = desk(1);
  dev.gates.p_1q = 0.02;
  const auto circ = ng::make_circuit(1, std::vector<ng::GateSpec>(5, ng::GateSpec::sx(0)));
  auto c = config(4000, 8);
  const auto exact = ng::run_shots(circ, dev, c).checkpoints.back();
  c.substeps = 32;
  const auto path = ng::run_shots(circ, dev, c).checkpoints.back();
  const double se = std::hypot(exact.diag_stderr[0], path.diag_stderr[0]);
  EXPECT_NEAR(exact.diag_mean[0], path.diag_mean[0], 5.0 * se + 2e-3);
}

TEST(Engine, InputValidation) {
  const auto dev = quiet(1);
  const auto circ = ng::make_circuit(1, {ng::GateSpec::x(0)});
  EXPECT_THROW(ng::run_shots(circ, dev, config(0, 1)), std::invalid_argument);
  EXPECT_THROW(ng::run_shots(circ, dev, config(10, 1), {2}), std::invalid_argument);
  EXPECT_THROW(ng::estimator_from_name("median"), std::invalid_argument);
  EXPECT_EQ(ng::estimator_name(ng::Estimator::Unweighted), "unweighted");
  EXPECT_GE(ng::resolved_workers(0), 1);
  EXPECT_EQ(ng::resolved_workers(3), 3);
}
