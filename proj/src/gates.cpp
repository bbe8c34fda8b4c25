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

#include "noisy_gates/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace noisy_gates {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RZ: return "RZ";
    case GateKind::RX: return "RX";
    case GateKind::X: return "X";
    case GateKind::SX: return "SX";
    case GateKind::CR: return "CR";
    case GateKind::CNOT: return "CNOT";
    case GateKind::IDLE: return "IDLE";
  }
  return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
  for (GateKind k : {GateKind::RZ, GateKind::RX, GateKind::X, GateKind::SX, GateKind::CR,
                     GateKind::CNOT, GateKind::IDLE}) {
    if (gate_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind \"" + std::string(name) + "\"");
}

int gate_arity(GateKind kind) {
  return (kind == GateKind::CR || kind == GateKind::CNOT) ? 2 : 1;
}

GateSpec GateSpec::rz(int q, double phi) { return {GateKind::RZ, {q}, 0.0, phi, 0.0}; }
GateSpec GateSpec::rx(int q, double theta, double phi) { return {GateKind::RX, {q}, theta, phi, 0.0}; }
GateSpec GateSpec::x(int q) { return {GateKind::X, {q}, std::numbers::pi, 0.0, 0.0}; }
GateSpec GateSpec::sx(int q) { return {GateKind::SX, {q}, std::numbers::pi / 2, 0.0, 0.0}; }
GateSpec GateSpec::cr(int control, int target, double theta, double phi) {
  return {GateKind::CR, {control, target}, theta, phi, 0.0};
}
GateSpec GateSpec::cnot(int control, int target) {
  return {GateKind::CNOT, {control, target}, 0.0, 0.0, 0.0};
}
GateSpec GateSpec::idle(int q, double duration) { return {GateKind::IDLE, {q}, 0.0, 0.0, duration}; }

double effective_theta(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::X: return std::numbers::pi;
    case GateKind::SX: return std::numbers::pi / 2;
    default: return gate.theta;
  }
}

double effective_phi(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::SX: return 0.0;
    default: return gate.phi;
  }
}

namespace {

ComplexMatrix rotation_axis(double phi) {
  return std::cos(phi) * pauli::x() + std::sin(phi) * pauli::y();
}

ComplexMatrix generator_for(const GateSpec& gate) {
  using std::numbers::pi;
  const double theta = effective_theta(gate);
  const double phi = effective_phi(gate);
  switch (gate.kind) {
    case GateKind::RX:
    case GateKind::X:
    case GateKind::SX:
      return 0.5 * theta * rotation_axis(phi);
    case GateKind::CR:
      return kron(pauli::z(), 0.5 * theta * rotation_axis(phi));
    case GateKind::CNOT:
      return 0.5 * pi * kron(pauli::projector_one(), pauli::x() - pauli::identity());
    case GateKind::IDLE:
      return ComplexMatrix::Zero(2, 2);
    case GateKind::RZ:
      break;
  }
  throw std::invalid_argument("RZ is a virtual gate and has no drive schedule");
}

}  // namespace

ComplexMatrix rx_matrix(double theta, double phi) {
  // exp(-i t n.sigma) = cos t I - i sin t n.sigma for a unit axis.
  return std::cos(0.5 * theta) * pauli::identity() - kI * std::sin(0.5 * theta) * rotation_axis(phi);
}

ComplexMatrix rz_matrix(double phi) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, phi);
  return m;
}

ComplexMatrix ideal_unitary(const GateSpec& gate) {
  const double theta = effective_theta(gate);
  const double phi = effective_phi(gate);
  switch (gate.kind) {
    case GateKind::RZ:
      return rz_matrix(gate.phi);
    case GateKind::RX:
    case GateKind::X:
    case GateKind::SX:
      return rx_matrix(theta, phi);
    case GateKind::CR: {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m.block(0, 0, 2, 2) = rx_matrix(theta, phi);
      m.block(2, 2, 2, 2) = rx_matrix(-theta, phi);
      return m;
    }
    case GateKind::CNOT: {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m.block(0, 0, 2, 2) = pauli::identity();
      m.block(2, 2, 2, 2) = pauli::x();
      return m;
    }
    case GateKind::IDLE:
      return pauli::identity();
  }
  throw std::invalid_argument("ideal_unitary: unknown gate");
}

DriveSchedule::DriveSchedule(ComplexMatrix generator, double duration,
                             std::optional<ComplexMatrix> target)
    : generator_(std::move(generator)), duration_(duration) {
  if (!(duration_ > 0.0)) throw std::invalid_argument("DriveSchedule: duration must be > 0");
  if (!is_hermitian(generator_, 1e-12)) {
    throw std::invalid_argument("DriveSchedule: generator must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (generator_ + generator_.adjoint()));
  eigvecs_ = eig.eigenvectors();
  eigvals_ = eig.eigenvalues();
  final_ = unitary_at(1.0);
  if (target) {
    if (target->rows() != final_.rows() || max_abs(*target - final_) > 1e-10) {
      throw std::invalid_argument("DriveSchedule: target unitary is not reached by the generator");
    }
    final_ = *std::move(target);
  }
}

ComplexMatrix DriveSchedule::unitary_at(double s) const {
  ComplexVector phases(eigvals_.size());
  for (Eigen::Index i = 0; i < eigvals_.size(); ++i) phases(i) = std::polar(1.0, -s * eigvals_(i));
  return eigvecs_ * phases.asDiagonal() * eigvecs_.adjoint();
}

DriveSchedule schedule(const GateSpec& gate) { return schedule(gate, gate.duration); }

DriveSchedule schedule(const GateSpec& gate, double duration) {
  if (gate.kind == GateKind::RZ) {
    throw std::invalid_argument("schedule: RZ is a virtual gate and has no drive");
  }
  return DriveSchedule(generator_for(gate), duration, ideal_unitary(gate));
}

ComplexMatrix interaction_jump(const DriveSchedule& sched, const ComplexMatrix& jump, double s) {
  if (jump.rows() != sched.dim()) {
    throw std::invalid_argument("interaction_jump: jump dimension does not match schedule");
  }
  const ComplexMatrix u = sched.unitary_at(s);
  return u.adjoint() * jump * u;
}

namespace {

void check_context(const DriveSchedule& sched, const NoiseContext& ctx) {
  for (const auto& t : ctx.terms) {
    if (t.op.rows() != sched.dim() || t.op.cols() != sched.dim()) {
      throw std::invalid_argument("noise context dimension does not match drive schedule");
    }
  }
}

std::vector<ItoIntegralSpec> xi_integrands(const DriveSchedule& sched, const NoiseContext& ctx,
                                           int quadrature_nodes) {
  std::vector<ItoIntegralSpec> specs;
  for (const auto& term : ctx.terms) {
    if (term.epsilon == 0.0) continue;
    const Complex scale = kI * term.epsilon;
    const ComplexMatrix op = term.op;
    specs.push_back({[&sched, op, scale](double s) -> ComplexMatrix {
                       return scale * interaction_jump(sched, op, s);
                     },
                     quadrature_nodes});
  }
  return specs;
}

}  // namespace

ComplexMatrix lambda_matrix(const DriveSchedule& sched, const NoiseContext& ctx,
                            int quadrature_nodes) {
  check_context(sched, ctx);
  ComplexMatrix acc = ComplexMatrix::Zero(sched.dim(), sched.dim());
  if (ctx.noiseless()) return acc;
  const QuadratureRule rule = gauss_legendre_panels(quadrature_nodes);
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
    const ComplexMatrix u = sched.unitary_at(rule.nodes[n]);
    for (const auto& term : ctx.terms) {
      if (term.epsilon == 0.0) continue;
      const ComplexMatrix l = u.adjoint() * term.op * u;
      acc += (rule.weights[n] * term.epsilon * term.epsilon) * (l.adjoint() * l - l * l);
    }
  }
  return -0.5 * acc;
}

ComplexMatrix sample_xi(const DriveSchedule& sched, const NoiseContext& ctx, RngStream& rng) {
  check_context(sched, ctx);
  ComplexMatrix xi = ComplexMatrix::Zero(sched.dim(), sched.dim());
  for (const auto& term : ctx.terms) {
    if (term.epsilon == 0.0) continue;
    const ComplexMatrix op = term.op;
    const ItoIntegralSpec spec{[&sched, op](double s) { return interaction_jump(sched, op, s); }};
    xi += (kI * term.epsilon) * sample_ito_integral(spec, rng);
  }
  return xi;
}

ComplexMatrix sample_noisy_gate(const DriveSchedule& sched, const NoiseContext& ctx,
                                RngStream& rng) {
  if (ctx.noiseless()) return sched.final_unitary();
  const ComplexMatrix lambda = lambda_matrix(sched, ctx);
  const ComplexMatrix xi = sample_xi(sched, ctx, rng);
  return sched.final_unitary() * expm(lambda) * expm(xi);
}

NoisyGateSampler::NoisyGateSampler(const DriveSchedule& sched, const NoiseContext& ctx,
                                   int quadrature_nodes)
    : ideal_(sched.final_unitary()) {
  check_context(sched, ctx);
  noiseless_ = ctx.noiseless();
  lambda_ = lambda_matrix(sched, ctx, quadrature_nodes);
  ideal_times_exp_lambda_ = noiseless_ ? ideal_ : ideal_ * expm(lambda_);
  if (!noiseless_) {
    const auto specs = xi_integrands(sched, ctx, quadrature_nodes);
    xi_ = GaussianMatrixSampler(ito_covariance(specs), sched.dim());
  }
}

ComplexMatrix NoisyGateSampler::xi_from_coordinates(const RealVector& z) const {
  if (noiseless_) return ComplexMatrix::Zero(ideal_.rows(), ideal_.cols());
  return xi_.from_coordinates(z);
}

ComplexMatrix NoisyGateSampler::from_coordinates(const RealVector& z) const {
  if (noiseless_) return ideal_;
  return ideal_times_exp_lambda_ * expm(xi_.from_coordinates(z));
}

ComplexMatrix NoisyGateSampler::sample(RngStream& rng) const {
  if (noiseless_) return ideal_;
  return ideal_times_exp_lambda_ * expm(xi_.sample(rng));
}

SubstepJumps substep_jumps(const DriveSchedule& sched, const NoiseContext& ctx, int m_substeps) {
  check_context(sched, ctx);
  if (m_substeps < 1) throw std::invalid_argument("substep_jumps: m_substeps must be >= 1");
  SubstepJumps out;
  out.substeps = m_substeps;
  for (const auto& term : ctx.terms) out.epsilons.push_back(term.epsilon);
  out.jumps.assign(ctx.terms.size(), {});
  for (auto& row : out.jumps) row.reserve(static_cast<std::size_t>(m_substeps));
  for (int m = 0; m < m_substeps; ++m) {
    const ComplexMatrix u = sched.unitary_at(static_cast<double>(m) / m_substeps);
    for (std::size_t k = 0; k < ctx.terms.size(); ++k) {
      out.jumps[k].push_back(u.adjoint() * ctx.terms[k].op * u);
    }
  }
  return out;
}

namespace {

void check_path(const SubstepJumps& jumps, const WienerPath& path) {
  if (path.substeps != jumps.substeps || path.increments.size() != jumps.jumps.size()) {
    throw std::invalid_argument("Wiener path does not match substep grid");
  }
}

Eigen::Index jump_dim(const SubstepJumps& jumps) {
  if (jumps.jumps.empty() || jumps.jumps.front().empty()) {
    throw std::invalid_argument("substep grid has no jump operators");
  }
  return jumps.jumps.front().front().rows();
}

// dS_m = sum_k eps_k L_km dW_km
ComplexMatrix increment(const SubstepJumps& jumps, const WienerPath& path, int m) {
  const Eigen::Index d = jump_dim(jumps);
  ComplexMatrix ds = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < jumps.jumps.size(); ++k) {
    ds += (jumps.epsilons[k] * path.increments[k][static_cast<std::size_t>(m)]) *
          jumps.jumps[k][static_cast<std::size_t>(m)];
  }
  return ds;
}

struct PathSums {
  ComplexMatrix s1;            // S_1
  ComplexMatrix commutator;    // sum [dS_m, S_m]
  ComplexMatrix ds_s;          // sum dS_m S_m
  ComplexMatrix ds_squared;    // sum dS_m^2
  ComplexMatrix l_dag_l;       // sum_k eps^2 sum_m L^dag L / M
  ComplexMatrix l_squared;     // sum_k eps^2 sum_m L^2 / M
};

PathSums path_sums(const SubstepJumps& jumps, const WienerPath& path) {
  check_path(jumps, path);
  const Eigen::Index d = jump_dim(jumps);
  PathSums sums{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d),
                ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
  const double dt = path.dt();
  for (int m = 0; m < jumps.substeps; ++m) {
    const ComplexMatrix ds = increment(jumps, path, m);
    const ComplexMatrix ds_s = ds * sums.s1;
    sums.ds_s += ds_s;
    sums.commutator += ds_s - sums.s1 * ds;
    sums.ds_squared += ds * ds;
    sums.s1 += ds;
    for (std::size_t k = 0; k < jumps.jumps.size(); ++k) {
      const ComplexMatrix& l = jumps.jumps[k][static_cast<std::size_t>(m)];
      const double w = jumps.epsilons[k] * jumps.epsilons[k] * dt;
      sums.l_dag_l += w * (l.adjoint() * l);
      sums.l_squared += w * (l * l);
    }
  }
  return sums;
}

}  // namespace

ComplexMatrix noisy_gate_on_path(const DriveSchedule& sched, const SubstepJumps& jumps,
                                 const WienerPath& path, bool include_commutator) {
  const PathSums sums = path_sums(jumps, path);
  const ComplexMatrix lambda = -0.5 * (sums.l_dag_l - sums.l_squared);
  ComplexMatrix xi = kI * sums.s1;
  if (include_commutator) xi -= 0.5 * sums.commutator;
  return sched.final_unitary() * expm(lambda) * expm(xi);
}

ComplexMatrix small_noise_reference(const DriveSchedule& sched, const SubstepJumps& jumps,
                                    const WienerPath& path) {
  const PathSums sums = path_sums(jumps, path);
  const Eigen::Index d = sums.s1.rows();
  const ComplexMatrix series =
      ComplexMatrix::Identity(d, d) + kI * sums.s1 - (0.5 * sums.l_dag_l + sums.ds_s);
  return sched.final_unitary() * series;
}

ComplexMatrix estimate_commutator_term(const SubstepJumps& jumps, const WienerPath& path) {
  return path_sums(jumps, path).commutator;
}

ComplexMatrix estimate_commutator_term(const DriveSchedule& sched, const NoiseContext& ctx,
                                       RngStream& rng, int m_substeps) {
  const SubstepJumps jumps = substep_jumps(sched, ctx, m_substeps);
  const WienerPath path =
      sample_wiener_path(static_cast<int>(ctx.terms.size()), m_substeps, rng);
  return estimate_commutator_term(jumps, path);
}

ItoRuleCheck ito_rule_check(const SubstepJumps& jumps, const WienerPath& path) {
  const PathSums sums = path_sums(jumps, path);
  const ComplexMatrix s_sq = sums.s1 * sums.s1;
  return {sums.ds_s, 0.5 * (s_sq + sums.commutator - sums.l_squared),
          0.5 * (s_sq + sums.commutator - sums.ds_squared)};
}

ComplexMatrix sample_spam_gate(double v, RngStream& rng) {
  if (v < 0.0) throw std::invalid_argument("sample_spam_gate: negative strength");
  if (v == 0.0) return pauli::identity();
  const double w = rng.normal(v);
  return std::cos(w) * pauli::identity() + kI * std::sin(w) * pauli::x();
}

ComplexMatrix sample_relaxation_gate(double gamma1, double gamma_pd, double dt, RngStream& rng) {
  if (gamma1 < 0.0 || gamma_pd < 0.0) {
    throw std::invalid_argument("sample_relaxation_gate: negative rate");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("sample_relaxation_gate: dt must be > 0");
  if (gamma1 == 0.0 && gamma_pd == 0.0) return pauli::identity();
  const double alpha = std::sqrt(gamma_pd / 4.0);
  const double w2 = rng.normal(dt);
  const double s_tilde = rng.normal(-std::expm1(-gamma1 * dt));
  const Complex plus = std::polar(1.0, alpha * w2);
  const Complex minus = std::conj(plus);
  ComplexMatrix n(2, 2);
  n(0, 0) = plus;
  n(0, 1) = kI * s_tilde * minus;
  n(1, 0) = 0.0;
  n(1, 1) = std::exp(-0.5 * gamma1 * dt) * minus;
  return n;
}

}  // namespace noisy_gates
