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

// Command-line front end: simulate, compare and validate.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "noisy_gates/acceptance.hpp"
#include "noisy_gates/experiments.hpp"
#include "noisy_gates/lindblad.hpp"
#include "noisy_gates/report.hpp"

namespace {

using namespace noisy_gates;

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kNumeric = 3;

struct Flags {
  std::string experiment = "repeat_x";
  int reps = 500;
  int checkpoints = 50;
  int shots = 4000;
  int runs = 10;
  std::uint64_t seed = 1;
  std::string device;
  std::string circuit;
  std::string backends = "noisy_gates,channel,lindblad";
  std::string estimator = "weighted";
  std::string cnot_mode = "direct";
  std::string channel_mode = "sampled";
  std::string out = "results";
  int parallel = 0;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--experiment", f.experiment, "repeat_x | repeat_cr | repeat_cnot | custom_circuit")
      ->capture_default_str();
  cmd->add_option("--reps", f.reps, "gate repetitions")->capture_default_str();
  cmd->add_option("--checkpoints", f.checkpoints, "number of checkpoints")->capture_default_str();
  cmd->add_option("--shots", f.shots, "trajectories (noisy gates) or samples (channel) per run")
      ->capture_default_str();
  cmd->add_option("--runs", f.runs, "independent runs (compare)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--device", f.device, "calibration JSON (default: built-in desk device)");
  cmd->add_option("--circuit", f.circuit, "circuit JSON for custom_circuit");
  cmd->add_option("--backends", f.backends, "comma-separated subset of noisy_gates,channel,lindblad")
      ->capture_default_str();
  cmd->add_option("--estimator", f.estimator, "weighted | unweighted")->capture_default_str();
  cmd->add_option("--cnot-mode", f.cnot_mode, "direct | decomposed")->capture_default_str();
  cmd->add_option("--channel-mode", f.channel_mode, "sampled | exact")->capture_default_str();
  cmd->add_option("--out", f.out, "output root directory")->capture_default_str();
  cmd->add_option("--parallel", f.parallel, "worker threads, 0 = all cores")->capture_default_str();
}

ExperimentConfig to_config(const Flags& f) {
  ExperimentConfig c;
  c.experiment = f.experiment;
  c.reps = f.reps;
  c.checkpoints = f.checkpoints;
  c.shots = f.shots;
  c.runs = f.runs;
  c.seed = f.seed;
  c.parallel = f.parallel;
  try {
    c.estimator = estimator_from_name(f.estimator);
    c.cnot_mode = cnot_mode_from_name(f.cnot_mode);
    c.channel_mode = channel_mode_from_name(f.channel_mode);
    c.backends.clear();
    std::stringstream ss(f.backends);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) c.backends.push_back(backend_from_name(item));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.device = f.device.empty() ? desk_device() : load_calibration(f.device);
  if (!f.circuit.empty()) c.circuit = load_circuit(f.circuit);
  validate(c);
  return c;
}

void report(const OutputFiles& files) {
  std::cout << files.dir.string() << '\n';
  for (const auto& p : files.files) std::cout << "  " << p.filename().string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-gates quantum circuit simulator with channel and Lindblad baselines"};
  app.require_subcommand(1);
  Flags sim_flags, cmp_flags;
  CLI::App* sim = app.add_subcommand("simulate", "run each selected backend once");
  add_experiment_flags(sim, sim_flags);
  CLI::App* cmp = app.add_subcommand("compare", "Hellinger distances of noisy gates and channel runs to Lindblad");
  add_experiment_flags(cmp, cmp_flags);
  CLI::App* val = app.add_subcommand("validate", "run the acceptance suite");
  std::vector<int> only;
  AcceptanceOptions acc;
  val->add_option("criteria", only, "criterion numbers (default: all)")->check(CLI::Range(1, 10));
  val->add_option("--seed", acc.seed, "seed")->capture_default_str();
  val->add_option("--parallel", acc.parallel, "worker threads, 0 = all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*sim) {
      const ExperimentConfig c = to_config(sim_flags);
      report(write_simulate(simulate(c), c, sim_flags.out));
    } else if (*cmp) {
      const ExperimentConfig c = to_config(cmp_flags);
      const CompareResult r = compare(c);
      const OutputFiles files = write_compare(r, c, cmp_flags.out);
      report(files);
      if (!r.relative_improvement.empty()) {
        std::cout << "noisy gates at or below channel at " << 100.0 * r.fraction_ng_better
                  << "% of checkpoints\n";
      }
    } else if (*val) {
      const double scale = AcceptanceOptions::from_environment().tolerance_scale;
      acc.tolerance_scale = scale;
      bool all = true;
      for (int id : only.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : only) {
        const CriterionResult r = run_criterion(id, acc);
        print_results(std::cout, {r});
        std::cout.flush();
        all = all && r.passed;
      }
      return all ? 0 : kNumeric;
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CalibrationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const CircuitError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const LindbladError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return 0;
}
