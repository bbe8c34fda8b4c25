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

#include <span>
#include <vector>

#include "noisy_gates/linalg.hpp"

namespace noisy_gates {

/// Probability distribution over 2^n outcomes. Entries down to -1e-12 are
/// clamped to zero; the sum must be 1 within 1e-9.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> p);

  const std::vector<double>& values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// (1/sqrt2) sqrt(sum (sqrt p - sqrt q)^2).
double hellinger(const ProbDist& p, const ProbDist& q);

/// |h_baseline - h_method| / h_baseline.
double relative_improvement(double h_baseline, double h_method);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Inputs must be
/// Hermitian and positive semidefinite to within 1e-9.
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> std;  // (n - 1) denominator; 0 for a single run
};

/// Pointwise mean and standard deviation over runs of equal length.
SeriesStats mean_std_over_runs(std::span<const std::vector<double>> runs);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Marginal over `keep` (big-endian qubit order within the result).
std::vector<double> marginal(std::span<const double> p, int n_qubits, std::span<const int> keep);

}  // namespace noisy_gates
