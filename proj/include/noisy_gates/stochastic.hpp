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
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "noisy_gates/linalg.hpp"

namespace noisy_gates {

/// Reproducible random stream identified by (master_seed, stream_index).
///
/// The same pair always yields the same sequence, independent of how many
/// other streams exist or which thread consumes them. One stream per
/// trajectory; streams are never shared between workers.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Standard normal draw.
  double normal();
  /// N(0, variance) draw; variance must be >= 0.
  double normal(double variance);
  double uniform();

  /// Independent child stream, a pure function of this stream's identity.
  RngStream substream(std::uint64_t child) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// m independent N(0, dt) increments.
std::vector<double> wiener_increments(RngStream& rng, int m, double dt);

/// Composite Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// `total_nodes` must be a positive multiple of 16. Panels use the 32-point
/// rule when `total_nodes` is a multiple of 32, the 16-point rule otherwise.
QuadratureRule gauss_legendre_panels(int total_nodes);

inline constexpr int kDefaultQuadratureNodes = 128;  // 4 panels x 32 points

/// Deterministic matrix-valued integrand s -> f(s) on [0, 1], driven by a
/// scalar Wiener process W_s; the integral of interest is I = int_0^1 f dW.
struct ItoIntegralSpec {
  std::function<ComplexMatrix(double)> integrand;
  int quadrature_nodes = kDefaultQuadratureNodes;
};

/// Covariance of the real vector [Re I (row-major), Im I (row-major)] by the
/// Ito isometry, evaluated with `gauss_legendre_panels`.
RealMatrix ito_covariance(const ItoIntegralSpec& spec);

/// Sum of covariances for integrals driven by independent Wiener processes,
/// i.e. the covariance of sum_k int f_k dW_k.
RealMatrix ito_covariance(std::span<const ItoIntegralSpec> specs);

/// Draws zero-mean complex matrices whose stacked real/imaginary parts follow
/// a given covariance. The covariance is factored once; negative
/// eigenvalues down to -1e-10 (scaled by the largest eigenvalue when that
/// exceeds 1) are clamped, anything below throws std::domain_error.
class GaussianMatrixSampler {
 public:
  GaussianMatrixSampler() = default;
  GaussianMatrixSampler(const RealMatrix& covariance, Eigen::Index dim);

  ComplexMatrix sample(RngStream& rng) const;
  /// Matrix for a given standard-normal coordinate vector (length rank()).
  ComplexMatrix from_coordinates(const RealVector& z) const;

  Eigen::Index dim() const { return dim_; }
  Eigen::Index rank() const { return factor_.cols(); }
  const RealMatrix& factor() const { return factor_; }

 private:
  Eigen::Index dim_ = 0;
  RealMatrix factor_;
};

ComplexMatrix sample_ito_integral(const ItoIntegralSpec& spec, RngStream& rng);

/// Brute-force oracle: sum_m f((m + 1/2)/M) dW_m with dW_m ~ N(0, 1/M).
ComplexMatrix sample_ito_substeps(const ItoIntegralSpec& spec, int m_substeps, RngStream& rng);

/// Discretized Wiener paths on [0, 1] for several independent processes,
/// shared between routines that must see the same realization.
struct WienerPath {
  int substeps = 0;
  std::vector<std::vector<double>> increments;  // [process][substep]

  double dt() const { return 1.0 / substeps; }
};

WienerPath sample_wiener_path(int n_processes, int m_substeps, RngStream& rng);

/// Max-entry distance between prod_m exp(eps B_m + eps^2/2 A_m) (m increasing
/// from right to left) and exp(eps^2/2 sum A) exp(eps sum B + eps^2/2 C),
/// C = sum_k [B_k, sum_{j<=k} B_j].
double product_formula_error(std::span<const ComplexMatrix> a_list,
                             std::span<const ComplexMatrix> b_list, double eps);

}  // namespace noisy_gates
