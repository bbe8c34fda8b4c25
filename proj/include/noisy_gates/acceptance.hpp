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
#include <ostream>
#include <string>
#include <vector>

namespace noisy_gates {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Multiplies every tolerance. Read from NOISY_GATES_TOLERANCE_SCALE by
  /// default; 0 makes every tolerance-based check fail.
  double tolerance_scale = 1.0;
  int parallel = 0;
  std::uint64_t seed = 2026;

  static AcceptanceOptions from_environment();
};

/// Runs the listed criteria (all ten when `only` is empty). A criterion
/// passes only if its check holds and it finishes within its time budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::vector<int>& only = {});

/// One criterion by number (1..10).
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// `PASS [id] name: detail (t s)` per line.
void print_results(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace noisy_gates
