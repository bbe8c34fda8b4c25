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

#include "noisy_gates/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"
#include "noisy_gates/channels.hpp"
#include "noisy_gates/lindblad.hpp"

namespace noisy_gates {

using nlohmann::json;

Backend backend_from_name(std::string_view name) {
  if (name == "noisy_gates") return Backend::NoisyGates;
  if (name == "channel") return Backend::Channel;
  if (name == "lindblad") return Backend::Lindblad;
  throw std::invalid_argument("unknown backend \"" + std::string(name) + "\"");
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::NoisyGates: return "noisy_gates";
    case Backend::Channel: return "channel";
    case Backend::Lindblad: return "lindblad";
  }
  return "?";
}

ChannelMode channel_mode_from_name(std::string_view name) {
  if (name == "sampled") return ChannelMode::Sampled;
  if (name == "exact") return ChannelMode::Exact;
  throw std::invalid_argument("unknown channel mode \"" + std::string(name) + "\"");
}

std::string_view channel_mode_name(ChannelMode m) {
  return m == ChannelMode::Sampled ? "sampled" : "exact";
}

bool ExperimentConfig::has(Backend b) const {
  return std::find(backends.begin(), backends.end(), b) != backends.end();
}

DeviceParams desk_device() {
  DeviceParams p;
  p.qubits = {{100e-6, 80e-6, 0.02}, {100e-6, 80e-6, 0.02}};
  p.gates = {35e-9, 300e-9, 5e-4, 0.05};
  return p;
}

void validate(const ExperimentConfig& c) {
  static const char* kKnown[] = {"repeat_x", "repeat_cr", "repeat_cnot", "custom_circuit"};
  if (std::find(std::begin(kKnown), std::end(kKnown), c.experiment) == std::end(kKnown)) {
    throw ConfigError("unknown experiment \"" + c.experiment + "\"");
  }
  if (c.shots < 1) throw ConfigError("shots must be >= 1");
  if (c.runs < 1) throw ConfigError("runs must be >= 1");
  if (c.checkpoints < 1) throw ConfigError("checkpoints must be >= 1");
  if (c.lindblad_steps < 1) throw ConfigError("lindblad steps must be >= 1");
  if (c.parallel < 0) throw ConfigError("parallel must be >= 0");
  if (c.backends.empty()) throw ConfigError("no backends selected");
  if (c.experiment == "custom_circuit") {
    if (!c.circuit) throw ConfigError("custom_circuit needs a circuit file");
  } else {
    if (c.circuit) throw ConfigError("a circuit file is only used with custom_circuit");
    if (c.reps < 1) throw ConfigError("reps must be >= 1");
    if (c.checkpoints > c.reps) throw ConfigError("checkpoints must not exceed reps");
  }
}

std::string config_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["reps"] = c.reps;
  j["checkpoints"] = c.checkpoints;
  j["shots"] = c.shots;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["device"] = json::parse(calibration_to_json(c.device));
  if (c.circuit) j["circuit"] = json::parse(circuit_to_json(*c.circuit));
  std::vector<std::string> names;
  for (Backend b : {Backend::NoisyGates, Backend::Channel, Backend::Lindblad}) {
    if (c.has(b)) names.emplace_back(backend_name(b));
  }
  j["backends"] = names;
  j["estimator"] = std::string(estimator_name(c.estimator));
  j["cnot_mode"] = std::string(cnot_mode_name(c.cnot_mode));
  j["channel_mode"] = std::string(channel_mode_name(c.channel_mode));
  j["lindblad_steps"] = c.lindblad_steps;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_json(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::size_t> checkpoint_counts(int reps, int checkpoints) {
  if (reps < 1 || checkpoints < 1 || checkpoints > reps) {
    throw ConfigError("need 1 <= checkpoints <= reps");
  }
  std::vector<std::size_t> out;
  for (int k = 1; k <= checkpoints; ++k) {
    out.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * reps / checkpoints)));
  }
  return out;
}

ExperimentPlan plan_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentPlan plan;
  std::vector<GateSpec> ops;
  if (config.experiment == "repeat_x") {
    ops.assign(static_cast<std::size_t>(config.reps), GateSpec::x(0));
    plan.circuit = make_circuit(1, ops);
  } else if (config.experiment == "repeat_cr") {
    ops.assign(static_cast<std::size_t>(config.reps), GateSpec::cr(0, 1, std::numbers::pi, 0.0));
    plan.circuit = make_circuit(2, ops);
    plan.initial_basis = 2;
    plan.observable = 2;
  } else if (config.experiment == "repeat_cnot") {
    ops.assign(static_cast<std::size_t>(config.reps), GateSpec::cnot(0, 1));
    plan.circuit = make_circuit(2, ops, {0, 1});
    plan.initial_basis = 2;
    plan.observable = 2;
  } else {
    plan.circuit = *config.circuit;
  }
  if (config.device.n_qubits() < plan.circuit.n_qubits) {
    throw ConfigError("device calibration covers " + std::to_string(config.device.n_qubits()) +
                      " qubits, experiment needs " + std::to_string(plan.circuit.n_qubits));
  }
  plan.scheduled = schedule_layers(plan.circuit, config.device, config.cnot_mode);
  const std::size_t n_layers = plan.scheduled.layers.size();

  if (config.experiment == "custom_circuit") {
    if (n_layers == 0) throw ConfigError("custom circuit has no gates");
    const int c = std::min<int>(config.checkpoints, static_cast<int>(n_layers));
    plan.gate_counts = checkpoint_counts(static_cast<int>(n_layers), c);
    plan.layer_counts = plan.gate_counts;
  } else {
    plan.gate_counts = checkpoint_counts(config.reps, config.checkpoints);
    // Every repetition schedules to the same number of layers.
    const std::size_t per_gate = n_layers / static_cast<std::size_t>(config.reps);
    for (std::size_t g : plan.gate_counts) plan.layer_counts.push_back(g * per_gate);
  }
  std::vector<double> elapsed{0.0};
  for (const auto& l : plan.scheduled.layers) elapsed.push_back(elapsed.back() + l.duration);
  for (std::size_t l : plan.layer_counts) plan.times_s.push_back(elapsed[l]);
  return plan;
}

DistSeries lindblad_series(const ExperimentPlan& plan, const ExperimentConfig& config) {
  const auto states =
      lindblad_layers(plan.scheduled, config.device, plan.initial_basis, config.lindblad_steps);
  DistSeries out;
  for (std::size_t l : plan.layer_counts) {
    out.push_back(apply_readout_error(states[l], plan.scheduled.measured, config.device).diagonal());
  }
  return out;
}

DistSeries channel_series(const ExperimentPlan& plan, const ExperimentConfig& config) {
  const ChannelSimResult sim = run_channel_sim(plan.scheduled, config.device, plan.initial_basis);
  DistSeries out;
  for (std::size_t l : plan.layer_counts) {
    const DensityMatrix rho =
        l == 0 ? DensityMatrix::basis(plan.scheduled.n_qubits, plan.initial_basis) : sim.layers[l - 1];
    out.push_back(apply_readout_error(rho, plan.scheduled.measured, config.device).diagonal());
  }
  return out;
}

DistSeries sample_series(const DistSeries& exact, int shots, std::uint64_t seed, int run) {
  RngStream rng(mix_seed(seed, 0xc4a22e1ULL), static_cast<std::uint64_t>(run));
  DistSeries out;
  for (const auto& p : exact) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = (acc += std::max(p[i], 0.0));
    std::vector<double> counts(p.size(), 0.0);
    for (int s = 0; s < shots; ++s) {
      const double u = rng.uniform() * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      counts[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                               static_cast<std::ptrdiff_t>(p.size()) - 1))] += 1.0;
    }
    for (double& c : counts) c /= shots;
    out.push_back(std::move(counts));
  }
  return out;
}

EnsembleResult noisy_gates_run(const ExperimentPlan& plan, const ExperimentConfig& config, int run) {
  RunConfig rc;
  rc.shots = config.shots;
  rc.master_seed = mix_seed(config.seed, static_cast<std::uint64_t>(run) + 1);
  rc.estimator = config.estimator;
  rc.cnot_mode = config.cnot_mode;
  rc.parallel = config.parallel;
  rc.initial_basis = plan.initial_basis;
  return run_shots(prepare(plan.scheduled, config.device), rc, plan.layer_counts);
}

SimulateResult simulate(const ExperimentConfig& config) {
  SimulateResult r;
  r.plan = plan_experiment(config);
  if (config.has(Backend::Lindblad)) r.lindblad = lindblad_series(r.plan, config);
  if (config.has(Backend::Channel)) {
    DistSeries exact = channel_series(r.plan, config);
    r.channel = config.channel_mode == ChannelMode::Exact
                    ? std::move(exact)
                    : sample_series(exact, config.shots, config.seed, 0);
  }
  if (config.has(Backend::NoisyGates)) r.noisy_gates = noisy_gates_run(r.plan, config, 0);
  return r;
}

CompareResult compare(const ExperimentConfig& config) {
  if (!config.has(Backend::Lindblad)) throw ConfigError("compare needs the lindblad backend");
  if (!config.has(Backend::NoisyGates) && !config.has(Backend::Channel)) {
    throw ConfigError("compare needs noisy_gates or channel");
  }
  CompareResult r;
  r.plan = plan_experiment(config);
  r.lindblad = lindblad_series(r.plan, config);
  const std::size_t n_cp = r.plan.layer_counts.size();

  auto hellinger_series = [&](const DistSeries& d) {
    std::vector<double> h(n_cp);
    for (std::size_t i = 0; i < n_cp; ++i) h[i] = hellinger(ProbDist(d[i]), ProbDist(r.lindblad[i]));
    return h;
  };

  if (config.has(Backend::Channel)) {
    const DistSeries exact = channel_series(r.plan, config);
    for (int run = 0; run < config.runs; ++run) {
      r.h_ch.push_back(hellinger_series(config.channel_mode == ChannelMode::Exact
                                            ? exact
                                            : sample_series(exact, config.shots, config.seed, run)));
    }
    r.ch = mean_std_over_runs(r.h_ch);
  }
  if (config.has(Backend::NoisyGates)) {
    for (int run = 0; run < config.runs; ++run) {
      const EnsembleResult e = noisy_gates_run(r.plan, config, run);
      DistSeries d;
      for (const auto& cp : e.checkpoints) d.push_back(cp.distribution(config.estimator));
      r.h_ng.push_back(hellinger_series(d));
    }
    r.ng = mean_std_over_runs(r.h_ng);
  }
  if (!r.h_ng.empty() && !r.h_ch.empty()) {
    std::size_t better = 0;
    for (std::size_t i = 0; i < n_cp; ++i) {
      const double ch = r.ch.mean[i];
      const double ng = r.ng.mean[i];
      if (ng <= ch) ++better;
      r.relative_improvement.push_back(ch > 0.0 ? relative_improvement(ch, ng) : 0.0);
      r.signed_improvement.push_back(ch > 0.0 ? (ch - ng) / ch : 0.0);
    }
    r.fraction_ng_better = static_cast<double>(better) / static_cast<double>(n_cp);
  }
  return r;
}

}  // namespace noisy_gates
