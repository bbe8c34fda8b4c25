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
#include <optional>
#include <string>
#include <vector>

#include "noisy_gates/circuit.hpp"
#include "noisy_gates/engine.hpp"
#include "noisy_gates/metrics.hpp"
#include "noisy_gates/noise_model.hpp"

namespace noisy_gates {

enum class Backend { NoisyGates, Channel, Lindblad };

Backend backend_from_name(std::string_view name);
std::string_view backend_name(Backend b);

/// How the channel baseline reports outcome probabilities: `sampled` draws
/// `shots` measurement outcomes per checkpoint and run (like a shot-based
/// simulator); `exact` uses the diagonal of the channel density matrix.
enum class ChannelMode { Sampled, Exact };

ChannelMode channel_mode_from_name(std::string_view name);
std::string_view channel_mode_name(ChannelMode m);

/// Invalid experiment settings (maps to the usage exit code).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment = "repeat_x";  // repeat_x | repeat_cr | repeat_cnot | custom_circuit
  int reps = 500;
  int checkpoints = 50;
  int shots = 4000;
  int runs = 10;
  std::uint64_t seed = 1;
  DeviceParams device;
  std::optional<Circuit> circuit;  // custom_circuit only
  std::vector<Backend> backends = {Backend::NoisyGates, Backend::Channel, Backend::Lindblad};
  Estimator estimator = Estimator::Weighted;
  CnotMode cnot_mode = CnotMode::Direct;
  ChannelMode channel_mode = ChannelMode::Sampled;
  int lindblad_steps = 100;  // RK4 steps per shortest gate
  int parallel = 0;          // does not affect results

  bool has(Backend b) const;
};

/// Throws ConfigError for inconsistent settings.
void validate(const ExperimentConfig& config);

/// Canonical JSON of everything that determines the results (not `parallel`).
std::string config_json(const ExperimentConfig& config);
/// FNV-1a 64 of config_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// The circuit an experiment runs and where it is observed.
///
/// repeat_x: X on q0 from |0>, no measurement noise.
/// repeat_cr: CR(pi, 0) on (q0, q1) from |10>, no measurement noise.
/// repeat_cnot: CNOT on (q0, q1) from |10>, both qubits measured (SPAM).
/// custom_circuit: the given circuit from |0...0>, checkpoints over layers.
struct ExperimentPlan {
  Circuit circuit;
  ScheduledCircuit scheduled;
  std::size_t initial_basis = 0;
  std::vector<std::size_t> gate_counts;   // x axis (layers for custom circuits)
  std::vector<std::size_t> layer_counts;  // scheduled layers at each checkpoint
  std::vector<double> times_s;            // elapsed time at each checkpoint
  std::size_t observable = 0;             // basis state whose population is tracked
};

ExperimentPlan plan_experiment(const ExperimentConfig& config);

/// Checkpoint gate counts round(k R / C), k = 1..C.
std::vector<std::size_t> checkpoint_counts(int reps, int checkpoints);

using DistSeries = std::vector<std::vector<double>>;  // [checkpoint][outcome]

/// Lindblad reference readout distributions (readout error applied to the
/// measured qubits) at every checkpoint.
DistSeries lindblad_series(const ExperimentPlan& plan, const ExperimentConfig& config);
/// Exact channel-simulator readout distributions at every checkpoint.
DistSeries channel_series(const ExperimentPlan& plan, const ExperimentConfig& config);
/// One shot-sampled realization of `exact` for run `run`.
DistSeries sample_series(const DistSeries& exact, int shots, std::uint64_t seed, int run);
/// Noisy-gates ensemble for run `run` (master seed derived from seed and run).
EnsembleResult noisy_gates_run(const ExperimentPlan& plan, const ExperimentConfig& config, int run);

struct SimulateResult {
  ExperimentPlan plan;
  std::optional<DistSeries> lindblad;
  std::optional<DistSeries> channel;
  std::optional<EnsembleResult> noisy_gates;
};

/// One run of every selected backend.
SimulateResult simulate(const ExperimentConfig& config);

struct CompareResult {
  ExperimentPlan plan;
  DistSeries lindblad;
  std::vector<std::vector<double>> h_ng;  // [run][checkpoint]
  std::vector<std::vector<double>> h_ch;  // [run][checkpoint]
  SeriesStats ng;
  SeriesStats ch;
  std::vector<double> relative_improvement;  // |H_ch - H_ng| / H_ch (0 if H_ch = 0)
  std::vector<double> signed_improvement;    // (H_ch - H_ng) / H_ch
  double fraction_ng_better = 0.0;  // checkpoints with mean H_ng <= mean H_ch
};

/// `runs` runs of noisy gates and of the channel baseline against one
/// Lindblad reference.
CompareResult compare(const ExperimentConfig& config);

/// Calibration used by the repetition experiments: T1 = 100 us, T2 = 80 us,
/// p_readout = 0.02 on two qubits, t_1q = 35 ns, p_1q = 5e-4, t_2q = 300 ns,
/// p_2q = 0.05.
DeviceParams desk_device();

}  // namespace noisy_gates
