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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "noisy_gates/circuit.hpp"
#include "noisy_gates/gates.hpp"
#include "noisy_gates/linalg.hpp"
#include "noisy_gates/noise_model.hpp"
#include "noisy_gates/stochastic.hpp"

namespace noisy_gates {

enum class Estimator { Weighted, Unweighted };

Estimator estimator_from_name(std::string_view name);
std::string_view estimator_name(Estimator e);

struct RunConfig {
  int shots = 1000;
  std::uint64_t master_seed = 0;
  Estimator estimator = Estimator::Weighted;
  CnotMode cnot_mode = CnotMode::Direct;
  /// 0: exact Gaussian sampling of Xi. M > 0: Wiener paths on M substeps
  /// (oracle mode, much slower).
  int substeps = 0;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  int parallel = 0;
  /// Computational basis index of the initial state (big-endian).
  std::size_t initial_basis = 0;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One step of a prepared circuit, with everything that does not depend on
/// the random draw cached.
struct Kernel {
  enum class Kind { Unitary, Noisy, Relaxation, Spam };
  Kind kind = Kind::Unitary;
  std::vector<int> qubits;
  ComplexMatrix unitary;                           // Unitary
  std::shared_ptr<const NoisyGateSampler> sampler;  // Noisy
  std::shared_ptr<const DriveSchedule> schedule;    // Noisy, substep mode
  std::shared_ptr<const SubstepJumps> jumps;        // Noisy, substep mode
  double gamma1 = 0.0, gamma_pd = 0.0, dt = 0.0;   // Relaxation
  double spam_variance = 0.0;                      // Spam
};

/// Scheduled circuit compiled to kernels. `layers[l]` holds the kernels of
/// scheduled layer l; `spam` is the pre-measurement slot.
struct PreparedCircuit {
  int n_qubits = 0;
  std::vector<std::vector<Kernel>> layers;
  std::vector<Kernel> spam;
  std::vector<int> measured;
  int substeps = 0;
};

PreparedCircuit prepare(const ScheduledCircuit& circuit, const DeviceParams& params,
                        int substeps = 0);

struct TrajectoryResult {
  StateVector state;  // unnormalized
  double weight = 0.0;
  std::size_t bitstring = 0;
};

/// Applies layers [begin, end) to `psi` using `rng`.
void apply_layers(const PreparedCircuit& prepared, std::size_t begin, std::size_t end,
                  StateVector& psi, RngStream& rng);

/// Applies the SPAM slot to `psi`.
void apply_spam(const PreparedCircuit& prepared, StateVector& psi, RngStream& rng);

/// Index drawn from |psi_x|^2 / ||psi||^2.
std::size_t sample_bitstring(const StateVector& psi, RngStream& rng);

/// Full circuit from |initial_basis>, SPAM slot, one sampled bitstring.
/// Throws NumericError when the state stops being finite.
TrajectoryResult run_trajectory(const PreparedCircuit& prepared, RngStream rng,
                                std::size_t initial_basis = 0);

/// Aggregates at one checkpoint.
struct CheckpointEstimate {
  std::size_t layers = 0;  // number of scheduled layers applied
  std::vector<double> weighted;    // sum_i |psi_i(x)|^2 / sum_i w_i
  std::vector<double> unweighted;  // sampled bitstring frequencies
  std::vector<double> diag_mean;   // (1/S) sum_i |psi_i(x)|^2
  std::vector<double> diag_stderr; // standard error of diag_mean
  std::optional<ComplexMatrix> rho;  // (1/S) sum_i |psi_i><psi_i|, n <= 5
  std::optional<RealMatrix> rho_stderr;  // entrywise standard error of |rho|
  double weight_mean = 0.0;
  double weight_stderr = 0.0;

  const std::vector<double>& distribution(Estimator e) const {
    return e == Estimator::Weighted ? weighted : unweighted;
  }
};

struct EnsembleResult {
  int shots = 0;
  std::vector<CheckpointEstimate> checkpoints;
};

/// Runs `config.shots` trajectories. Shot i uses RngStream(master_seed, i).
/// At every entry of `checkpoints` (layer counts, ascending, each <= number
/// of layers) a copy of the state passes through the SPAM slot and is
/// recorded; an empty list means only the end of the circuit. Shots are
/// reduced in fixed chunks in chunk order, so the result is bitwise
/// independent of the worker count.
EnsembleResult run_shots(const PreparedCircuit& prepared, const RunConfig& config,
                         std::vector<std::size_t> checkpoints = {});

/// Convenience wrapper: schedule, prepare, run.
EnsembleResult run_shots(const Circuit& circuit, const DeviceParams& params,
                         const RunConfig& config, std::vector<std::size_t> checkpoints = {});

/// Worker count used for `parallel` (0 means hardware concurrency).
int resolved_workers(int parallel);

}  // namespace noisy_gates
