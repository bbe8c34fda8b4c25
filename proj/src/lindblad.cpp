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

#include "noisy_gates/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "noisy_gates/gates.hpp"

namespace noisy_gates {

namespace {

// Precomputed pieces of the dissipator for a fixed term list.
struct Dissipator {
  std::vector<ComplexMatrix> ops;
  std::vector<ComplexMatrix> ops_dag;
  std::vector<double> rates;
  ComplexMatrix effective;  // H - i/2 sum gamma L^dagger L

  Dissipator(const ComplexMatrix& hamiltonian, const std::vector<JumpTerm>& terms)
      : effective(hamiltonian) {
    for (const auto& t : terms) {
      if (t.rate == 0.0) continue;
      if (t.op.rows() != hamiltonian.rows()) {
        throw std::invalid_argument("lindblad: jump operator dimension mismatch");
      }
      ops.push_back(t.op);
      ops_dag.push_back(t.op.adjoint());
      rates.push_back(t.rate);
      effective -= (0.5 * t.rate) * kI * (t.op.adjoint() * t.op);
    }
  }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    // -i (H_eff rho - rho H_eff^dagger) + sum gamma L rho L^dagger
    const ComplexMatrix a = effective * rho;
    ComplexMatrix out = -kI * (a - a.adjoint());
    for (std::size_t k = 0; k < ops.size(); ++k) {
      out.noalias() += rates[k] * (ops[k] * rho * ops_dag[k]);
    }
    return out;
  }
};

ComplexMatrix rk4_steps(ComplexMatrix rho, const Dissipator& f, double dt, int steps) {
  for (int i = 0; i < steps; ++i) {
    const ComplexMatrix k1 = f(rho);
    const ComplexMatrix k2 = f(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = f(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = f(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    if (!all_finite(rho)) {
      throw LindbladError("lindblad: state became non-finite (step " + std::to_string(i) +
                          ", dt = " + std::to_string(dt) + " s)");
    }
  }
  return rho;
}

}  // namespace

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& hamiltonian,
                           const std::vector<JumpTerm>& terms) {
  if (rho.rows() != hamiltonian.rows()) {
    throw std::invalid_argument("lindblad_rhs: rho and Hamiltonian dimensions differ");
  }
  return Dissipator(hamiltonian, terms)(rho);
}

DensityMatrix evolve_segment(const DensityMatrix& rho, const ComplexMatrix& hamiltonian,
                             const std::vector<JumpTerm>& terms, double duration, int steps) {
  if (steps < 1) throw std::invalid_argument("evolve_segment: steps must be >= 1");
  if (!(duration > 0.0)) throw std::invalid_argument("evolve_segment: duration must be > 0");
  const Dissipator f(hamiltonian, terms);
  return {rho.n_qubits, rk4_steps(rho.rho, f, duration / steps, steps)};
}

LindbladSeries solve(const LindbladProblem& problem, double dt_max) {
  if (!(dt_max > 0.0)) throw std::invalid_argument("lindblad solve: dt_max must be > 0");
  LindbladSeries series;
  DensityMatrix rho = problem.initial;
  double t = 0.0;
  series.times.push_back(t);
  series.states.push_back(rho);
  for (const auto& seg : problem.segments) {
    if (!(seg.duration > 0.0)) throw std::invalid_argument("lindblad solve: segment duration must be > 0");
    if (!all_finite(seg.hamiltonian)) throw std::invalid_argument("lindblad solve: non-finite Hamiltonian");
    const int steps = static_cast<int>(std::ceil(seg.duration / dt_max * (1.0 - 1e-12)));
    rho = evolve_segment(rho, seg.hamiltonian, problem.terms, seg.duration, std::max(steps, 1));
    t += seg.duration;
    series.times.push_back(t);
    series.states.push_back(rho);
  }
  return series;
}

void write_lindblad_csv(std::ostream& out, const LindbladSeries& series, bool diagonal_only) {
  if (series.states.empty()) return;
  const Eigen::Index dim = series.states.front().rho.rows();
  out << "time_s";
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (diagonal_only) {
      out << ",p_" << i;
    } else {
      for (Eigen::Index j = 0; j < dim; ++j) out << ",re_" << i << j << ",im_" << i << j;
    }
  }
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t n = 0; n < series.states.size(); ++n) {
    out << series.times[n];
    const ComplexMatrix& rho = series.states[n].rho;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (diagonal_only) {
        out << ',' << rho(i, i).real();
      } else {
        for (Eigen::Index j = 0; j < dim; ++j) out << ',' << rho(i, j).real() << ',' << rho(i, j).imag();
      }
    }
    out << '\n';
  }
}

namespace {

struct TimedOp {
  GateSpec gate;
  double start = 0.0;
  double duration = 0.0;
};

void embed_terms(const NoiseContext& ctx, std::span<const int> qubits, int n,
                 std::vector<JumpTerm>& out) {
  for (const auto& t : ctx.terms) {
    if (t.rate == 0.0) continue;
    out.push_back({embed_operator(t.op, qubits, n), t.rate});
  }
}

}  // namespace

std::vector<DensityMatrix> lindblad_layers(const ScheduledCircuit& circuit,
                                           const DeviceParams& params,
                                           std::size_t initial_basis, int steps_per_gate) {
  if (steps_per_gate < 1) throw std::invalid_argument("lindblad_layers: steps_per_gate must be >= 1");
  const int n = circuit.n_qubits;
  double shortest = INFINITY;
  for (const auto& layer : circuit.layers) {
    for (const auto& g : layer.gates) {
      const double d = params.duration_of(g);
      if (g.kind != GateKind::RZ && g.kind != GateKind::IDLE && d > 0.0) shortest = std::min(shortest, d);
    }
  }
  if (!std::isfinite(shortest)) shortest = params.gates.t_1q > 0.0 ? params.gates.t_1q : 1e-8;
  const double dt_max = shortest / steps_per_gate;

  // Relaxation on an uncovered qubit.
  std::vector<std::vector<JumpTerm>> idle_terms(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    const int qs[1] = {q};
    embed_terms(noise_context_for_gate(GateSpec::idle(q, 1.0), params), qs, n,
                idle_terms[static_cast<std::size_t>(q)]);
  }

  std::vector<DensityMatrix> out;
  DensityMatrix rho = DensityMatrix::basis(n, initial_basis);
  out.push_back(rho);
  for (const auto& layer : circuit.layers) {
    // Ops on the same qubit run back to back in listed order.
    std::vector<double> clock(static_cast<std::size_t>(n), 0.0);
    std::vector<TimedOp> ops;
    for (const auto& g : layer.gates) {
      double start = 0.0;
      for (int q : g.qubits) start = std::max(start, clock[static_cast<std::size_t>(q)]);
      const double d = params.duration_of(g);
      for (int q : g.qubits) clock[static_cast<std::size_t>(q)] = start + d;
      ops.push_back({g, start, d});
    }
    std::vector<double> cuts{0.0};
    for (const auto& op : ops) {
      cuts.push_back(op.start);
      cuts.push_back(op.start + op.duration);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-18; }),
               cuts.end());

    // Per-op Hamiltonian and terms, computed once per layer.
    std::vector<ComplexMatrix> hams(ops.size());
    std::vector<std::vector<JumpTerm>> terms(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const GateSpec& g = ops[i].gate;
      if (g.kind == GateKind::RZ || ops[i].duration <= 0.0) continue;
      embed_terms(noise_context_for_gate(g, params), g.qubits, n, terms[i]);
      if (g.kind != GateKind::IDLE) {
        hams[i] = embed_operator(schedule(g, ops[i].duration).hamiltonian(), g.qubits, n);
      }
    }

    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const double a = cuts[c];
      // Instantaneous frame changes starting here.
      for (const auto& op : ops) {
        if ((op.gate.kind == GateKind::RZ || op.duration <= 0.0) && std::abs(op.start - a) <= 1e-18 &&
            op.gate.kind != GateKind::IDLE) {
          const ComplexMatrix u = embed_operator(ideal_unitary(op.gate), op.gate.qubits, n);
          rho.rho = u * rho.rho * u.adjoint();
        }
      }
      if (c + 1 == cuts.size()) break;
      const double b = cuts[c + 1];
      const double mid = 0.5 * (a + b);
      ComplexMatrix h = ComplexMatrix::Zero(rho.rho.rows(), rho.rho.cols());
      std::vector<JumpTerm> active;
      std::vector<bool> covered(static_cast<std::size_t>(n), false);
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].duration <= 0.0 || mid < ops[i].start || mid > ops[i].start + ops[i].duration) continue;
        if (hams[i].size() > 0) h += hams[i];
        active.insert(active.end(), terms[i].begin(), terms[i].end());
        for (int q : ops[i].gate.qubits) covered[static_cast<std::size_t>(q)] = true;
      }
      for (int q = 0; q < n; ++q) {
        if (!covered[static_cast<std::size_t>(q)]) {
          const auto& it = idle_terms[static_cast<std::size_t>(q)];
          active.insert(active.end(), it.begin(), it.end());
        }
      }
      const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / dt_max * (1.0 - 1e-12))));
      rho = evolve_segment(rho, h, active, b - a, steps);
    }
    out.push_back(rho);
  }
  return out;
}

}  // namespace noisy_gates
