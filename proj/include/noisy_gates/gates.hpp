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

#include <optional>

#include "noisy_gates/gate_spec.hpp"
#include "noisy_gates/linalg.hpp"
#include "noisy_gates/noise_model.hpp"
#include "noisy_gates/stochastic.hpp"

namespace noisy_gates {

/// RX(theta, phi) = exp(-i theta/2 (cos phi X + sin phi Y)).
ComplexMatrix rx_matrix(double theta, double phi);
/// RZ(phi) = diag(1, e^{i phi}).
ComplexMatrix rz_matrix(double phi);

/// Ideal unitary. CR(theta, phi) = block-diag(RX(theta, phi), RX(-theta, phi))
/// with the control as the most significant qubit; CNOT is the textbook
/// block-diag(I, X).
ComplexMatrix ideal_unitary(const GateSpec& gate);

/// Constant drive over rescaled time s in [0, 1]:
/// U_s = exp(-i s G) with U_1 the ideal unitary. G is dimensionless; the
/// physical Hamiltonian is G / duration (hbar = 1).
class DriveSchedule {
 public:
  /// `target`, when given, is returned by final_unitary() in place of the
  /// numerically exponentiated endpoint; it must agree with it to 1e-10.
  DriveSchedule(ComplexMatrix generator, double duration,
                std::optional<ComplexMatrix> target = std::nullopt);

  const ComplexMatrix& generator() const { return generator_; }
  double duration() const { return duration_; }
  ComplexMatrix hamiltonian() const { return generator_ / duration_; }
  Eigen::Index dim() const { return generator_.rows(); }

  ComplexMatrix unitary_at(double s) const;
  const ComplexMatrix& final_unitary() const { return final_; }

 private:
  ComplexMatrix generator_;
  double duration_;
  // Eigendecomposition of the Hermitian generator for cheap U_s.
  ComplexMatrix eigvecs_;
  RealVector eigvals_;
  ComplexMatrix final_;
};

/// Drive schedule reaching `ideal_unitary(gate)` linearly in s. Throws
/// std::invalid_argument for RZ (virtual, no drive). `duration` defaults to
/// gate.duration.
DriveSchedule schedule(const GateSpec& gate);
DriveSchedule schedule(const GateSpec& gate, double duration);

/// U_s^dagger L U_s.
ComplexMatrix interaction_jump(const DriveSchedule& sched, const ComplexMatrix& jump, double s);

/// Lambda = -1/2 sum_k eps_k^2 int_0^1 (L_ks^dagger L_ks - L_ks^2) ds.
ComplexMatrix lambda_matrix(const DriveSchedule& sched, const NoiseContext& ctx,
                            int quadrature_nodes = kDefaultQuadratureNodes);

/// Xi = sum_k i eps_k int_0^1 L_ks dW_ks with one independent Wiener
/// process per jump operator; the second-order commutator term is dropped.
ComplexMatrix sample_xi(const DriveSchedule& sched, const NoiseContext& ctx, RngStream& rng);

/// One draw of N = U_g exp(Lambda) exp(Xi).
ComplexMatrix sample_noisy_gate(const DriveSchedule& sched, const NoiseContext& ctx,
                                RngStream& rng);

/// Precomputed sampler for repeated draws of the same noisy gate.
///
/// Xi is a single Gaussian matrix whose covariance is the sum of the
/// per-jump covariances, so one factorization serves every draw.
class NoisyGateSampler {
 public:
  NoisyGateSampler(const DriveSchedule& sched, const NoiseContext& ctx,
                   int quadrature_nodes = kDefaultQuadratureNodes);

  ComplexMatrix sample(RngStream& rng) const;
  /// N for explicit standard-normal coordinates of Xi (length xi_rank()).
  ComplexMatrix from_coordinates(const RealVector& z) const;
  ComplexMatrix xi_from_coordinates(const RealVector& z) const;

  const ComplexMatrix& ideal() const { return ideal_; }
  const ComplexMatrix& lambda() const { return lambda_; }
  Eigen::Index xi_rank() const { return xi_.rank(); }
  bool noiseless() const { return noiseless_; }

 private:
  ComplexMatrix ideal_;
  ComplexMatrix lambda_;
  ComplexMatrix ideal_times_exp_lambda_;
  GaussianMatrixSampler xi_;
  bool noiseless_ = false;
};

/// Interaction-picture jumps sampled on the left points m/M of a substep grid,
/// shared by the path-based routines below. jumps[k][m] = L_{k, m/M}.
struct SubstepJumps {
  int substeps = 0;
  std::vector<double> epsilons;
  std::vector<std::vector<ComplexMatrix>> jumps;
};

SubstepJumps substep_jumps(const DriveSchedule& sched, const NoiseContext& ctx, int m_substeps);

/// Pathwise noisy gate U_g exp(Lambda_M) exp(Xi_M) with every integral
/// replaced by its left-point sum on `path`. With `include_commutator` the
/// term -C/2 is kept in Xi.
ComplexMatrix noisy_gate_on_path(const DriveSchedule& sched, const SubstepJumps& jumps,
                                 const WienerPath& path, bool include_commutator);

/// Truncated small-noise series U_g [1 + i S_1 - int (1/2 sum eps^2 L^dagger L ds + dS_s S_s)]
/// with S_s = sum_k eps_k int_0^s L_k dW_k, on the same path.
ComplexMatrix small_noise_reference(const DriveSchedule& sched, const SubstepJumps& jumps,
                                    const WienerPath& path);

/// Double Ito estimate of C = sum_m [dS_m, S_m] (eps-weighted). The full
/// second-order exponent is Xi - C/2.
ComplexMatrix estimate_commutator_term(const SubstepJumps& jumps, const WienerPath& path);
ComplexMatrix estimate_commutator_term(const DriveSchedule& sched, const NoiseContext& ctx,
                                       RngStream& rng, int m_substeps);

/// Pieces of the Ito-rule identity
///   int dS S = 1/2 [S_1^2 + int [dS, S] - sum eps^2 int L^2 ds]
/// evaluated on a path: `direct` is the left-point sum of dS_m S_m, `via_identity`
/// the right-hand side with the deterministic quadratic-variation term,
/// `via_discrete_identity` the same with the realized sum of dS_m^2.
struct ItoRuleCheck {
  ComplexMatrix direct;
  ComplexMatrix via_identity;
  ComplexMatrix via_discrete_identity;
};

ItoRuleCheck ito_rule_check(const SubstepJumps& jumps, const WienerPath& path);

/// Exact SPAM gate exp(i w X), w ~ N(0, v).
ComplexMatrix sample_spam_gate(double v, RngStream& rng);

/// Gaussian-sampleable relaxation gate
///   [[e^{i a W}, i S e^{-i a W}], [0, e^{-gamma1 dt/2} e^{-i a W}]],
/// a = sqrt(gamma_pd / 4), W ~ N(0, dt), S ~ N(0, 1 - e^{-gamma1 dt}).
ComplexMatrix sample_relaxation_gate(double gamma1, double gamma_pd, double dt, RngStream& rng);

}  // namespace noisy_gates
