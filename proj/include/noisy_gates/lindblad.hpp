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

#include <ostream>
#include <vector>

#include "noisy_gates/circuit.hpp"
#include "noisy_gates/linalg.hpp"
#include "noisy_gates/noise_model.hpp"

namespace noisy_gates {

/// Jump operator on the full register with its rate (1/s).
struct JumpTerm {
  ComplexMatrix op;
  double rate = 0.0;
};

/// Constant Hamiltonian (1/s, hbar = 1) applied for `duration` seconds.
struct HamiltonianSegment {
  ComplexMatrix hamiltonian;
  double duration = 0.0;
};

struct LindbladProblem {
  std::vector<HamiltonianSegment> segments;
  std::vector<JumpTerm> terms;
  DensityMatrix initial;
};

struct LindbladSeries {
  std::vector<double> times;          // segment boundaries, starting at 0
  std::vector<DensityMatrix> states;  // rho at each boundary
};

class LindbladError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// -i[H, rho] + sum_k gamma_k (L rho L^dagger - {L^dagger L, rho}/2).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& hamiltonian,
                           const std::vector<JumpTerm>& terms);

/// Fixed-step classic RK4. Each segment is split into ceil(duration/dt_max)
/// equal steps; rho is Hermitian-symmetrized after every step. Throws
/// LindbladError if the state stops being finite.
LindbladSeries solve(const LindbladProblem& problem, double dt_max);

/// Same integrator, but one segment with `steps` equal steps; used for
/// incremental evolution.
DensityMatrix evolve_segment(const DensityMatrix& rho, const ComplexMatrix& hamiltonian,
                             const std::vector<JumpTerm>& terms, double duration, int steps);

/// CSV with header `time_s,re_00,im_00,...` (row-major) or, with
/// `diagonal_only`, `time_s,p_0,...`.
void write_lindblad_csv(std::ostream& out, const LindbladSeries& series, bool diagonal_only);

/// Reference evolution of a scheduled circuit under the Lindblad equation
/// with the same jump operators the noisy gates use: each driven gate
/// contributes G / t_g to H and its noise context while it runs, qubits not
/// covered by a gate relax, RZ is an instantaneous frame change. Layers are
/// split at gate end times; the step is the shortest driven gate duration
/// divided by `steps_per_gate`. Returns rho before the first layer and after
/// every layer (size layers + 1).
std::vector<DensityMatrix> lindblad_layers(const ScheduledCircuit& circuit,
                                           const DeviceParams& params,
                                           std::size_t initial_basis = 0,
                                           int steps_per_gate = 100);

}  // namespace noisy_gates
