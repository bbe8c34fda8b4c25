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

#include <filesystem>
#include <string>
#include <vector>

#include "noisy_gates/experiments.hpp"

namespace noisy_gates {

/// Files written by one command invocation.
struct OutputFiles {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
};

/// `<root>/<command>-<experiment>-<config hash>`.
std::filesystem::path output_dir(const std::filesystem::path& root, std::string_view command,
                                 const ExperimentConfig& config);

/// Writes per-backend distribution series (CSV), the noisy-gates density
/// estimate when available, and metadata.json. Output bytes depend only on
/// the configuration.
OutputFiles write_simulate(const SimulateResult& result, const ExperimentConfig& config,
                           const std::filesystem::path& root);

/// Writes the Lindblad series, per-run Hellinger series of both methods,
/// their means and standard deviations, the improvement series and
/// metadata.json.
OutputFiles write_compare(const CompareResult& result, const ExperimentConfig& config,
                          const std::filesystem::path& root);

/// Revision baked in at configure time ("unknown" outside a git checkout).
std::string_view source_revision();

}  // namespace noisy_gates
