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

#include "noisy_gates/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace noisy_gates {

namespace {
constexpr double kClamp = 1e-12;
}

ProbDist::ProbDist(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("ProbDist: empty distribution");
  double sum = 0.0;
  for (double& v : p_) {
    if (!std::isfinite(v) || v < -kClamp) {
      throw std::invalid_argument("ProbDist: entries must be finite and >= -1e-12");
    }
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("ProbDist: probabilities sum to " + std::to_string(sum));
  }
}

double hellinger(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw std::invalid_argument("hellinger: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += d * d;
  }
  return std::min(1.0, std::sqrt(0.5 * s));
}

double relative_improvement(double h_baseline, double h_method) {
  if (!(h_baseline > 0.0)) throw std::invalid_argument("relative_improvement: zero baseline");
  return std::abs(h_baseline - h_method) / h_baseline;
}

namespace {

Eigen::SelfAdjointEigenSolver<ComplexMatrix> checked_eig(const ComplexMatrix& m, const char* name) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string("fidelity: ") + name + " not square");
  if (max_abs(m - m.adjoint()) > 1e-9) {
    throw std::invalid_argument(std::string("fidelity: ") + name + " is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw std::invalid_argument(std::string("fidelity: ") + name + " is not positive semidefinite");
  }
  return es;
}

}  // namespace

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows()) throw std::invalid_argument("fidelity: dimension mismatch");
  const auto er = checked_eig(rho, "rho");
  checked_eig(sigma, "sigma");
  const RealVector sq = er.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix root = er.eigenvectors() * sq.asDiagonal() * er.eigenvectors().adjoint();
  const ComplexMatrix inner = root * sigma * root;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ei(0.5 * (inner + inner.adjoint()),
                                                 Eigen::EigenvaluesOnly);
  const double t = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

SeriesStats mean_std_over_runs(std::span<const std::vector<double>> runs) {
  if (runs.empty()) throw std::invalid_argument("mean_std_over_runs: no runs");
  const std::size_t len = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != len) throw std::invalid_argument("mean_std_over_runs: unequal run lengths");
  }
  const double n = static_cast<double>(runs.size());
  SeriesStats out{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (std::size_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r[i] - mean) * (r[i] - mean);
    out.mean[i] = mean;
    out.std[i] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need two or more paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be > 0");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
  return sxy / sxx;
}

std::vector<double> marginal(std::span<const double> p, int n_qubits, std::span<const int> keep) {
  if (p.size() != (std::size_t{1} << n_qubits)) throw std::invalid_argument("marginal: size mismatch");
  check_qubits(keep, n_qubits);
  std::vector<double> out(std::size_t{1} << keep.size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::size_t y = 0;
    for (int q : keep) y = (y << 1) | ((x >> (n_qubits - 1 - q)) & 1U);
    out[y] += p[x];
  }
  return out;
}

}  // namespace noisy_gates
