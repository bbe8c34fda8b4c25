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

#include "noisy_gates/stochastic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace noisy_gates {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(mix_seed(mix_seed(master_seed, 0x5eedULL), stream_index)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::normal(double variance) {
  if (variance < 0.0) throw std::invalid_argument("normal: negative variance");
  return std::sqrt(variance) * normal_(engine_);
}

double RngStream::uniform() { return uniform_(engine_); }

RngStream RngStream::substream(std::uint64_t child) const {
  return RngStream(mix_seed(master_seed_, stream_index_), child);
}

std::vector<double> wiener_increments(RngStream& rng, int m, double dt) {
  if (m < 1) throw std::invalid_argument("wiener_increments: m must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increments: dt must be > 0");
  std::vector<double> out(static_cast<std::size_t>(m));
  const double sd = std::sqrt(dt);
  for (auto& v : out) v = sd * rng.normal();
  return out;
}

namespace {

template <std::size_t Points>
void append_panels(QuadratureRule& rule, int panels) {
  using Rule = boost::math::quadrature::gauss<double, Points>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      const double x = abscissa[i];
      const double w = weights[i] * 0.5 * h;
      if (x == 0.0) {
        rule.nodes.push_back(mid);
        rule.weights.push_back(w);
      } else {
        rule.nodes.push_back(mid - 0.5 * h * x);
        rule.weights.push_back(w);
        rule.nodes.push_back(mid + 0.5 * h * x);
        rule.weights.push_back(w);
      }
    }
  }
}

}  // namespace

QuadratureRule gauss_legendre_panels(int total_nodes) {
  if (total_nodes < 16 || total_nodes % 16 != 0) {
    throw std::invalid_argument("quadrature_nodes must be a positive multiple of 16, got " +
                                std::to_string(total_nodes));
  }
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(total_nodes));
  rule.weights.reserve(static_cast<std::size_t>(total_nodes));
  if (total_nodes % 32 == 0) {
    append_panels<32>(rule, total_nodes / 32);
  } else {
    append_panels<16>(rule, total_nodes / 16);
  }
  return rule;
}

namespace {

RealVector stack_real_imag(const ComplexMatrix& m) {
  const Eigen::Index d2 = m.rows() * m.cols();
  RealVector v(2 * d2);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      v(i * m.cols() + j) = m(i, j).real();
      v(d2 + i * m.cols() + j) = m(i, j).imag();
    }
  }
  return v;
}

void accumulate_covariance(const ItoIntegralSpec& spec, RealMatrix& cov, Eigen::Index& dim) {
  if (!spec.integrand) throw std::invalid_argument("ito_covariance: empty integrand");
  const QuadratureRule rule = gauss_legendre_panels(spec.quadrature_nodes);
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
    const ComplexMatrix f = spec.integrand(rule.nodes[n]);
    if (!all_finite(f)) {
      throw std::domain_error("ito_covariance: non-finite integrand at s = " +
                              std::to_string(rule.nodes[n]));
    }
    if (dim == 0) {
      dim = f.rows();
      cov = RealMatrix::Zero(2 * dim * dim, 2 * dim * dim);
    } else if (f.rows() != dim || f.cols() != dim) {
      throw std::invalid_argument("ito_covariance: integrand dimension changed");
    }
    const RealVector v = stack_real_imag(f);
    cov.noalias() += rule.weights[n] * (v * v.transpose());
  }
}

}  // namespace

RealMatrix ito_covariance(const ItoIntegralSpec& spec) {
  RealMatrix cov;
  Eigen::Index dim = 0;
  accumulate_covariance(spec, cov, dim);
  return cov;
}

RealMatrix ito_covariance(std::span<const ItoIntegralSpec> specs) {
  if (specs.empty()) throw std::invalid_argument("ito_covariance: no integrands");
  RealMatrix cov;
  Eigen::Index dim = 0;
  for (const auto& spec : specs) accumulate_covariance(spec, cov, dim);
  return cov;
}

GaussianMatrixSampler::GaussianMatrixSampler(const RealMatrix& covariance, Eigen::Index dim)
    : dim_(dim) {
  const Eigen::Index n = 2 * dim * dim;
  if (covariance.rows() != n || covariance.cols() != n) {
    throw std::invalid_argument("GaussianMatrixSampler: covariance has wrong shape");
  }
  const RealMatrix sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
  if (eig.info() != Eigen::Success) throw std::domain_error("covariance eigensolver failed");
  const RealVector& lambda = eig.eigenvalues();
  const double largest = std::max(lambda.maxCoeff(), 0.0);
  const double jitter = 1e-10 * std::max(1.0, largest);
  if (lambda.minCoeff() < -jitter) {
    throw std::domain_error("covariance is not positive semidefinite: eigenvalue " +
                            std::to_string(lambda.minCoeff()));
  }
  const double keep = 1e-15 * std::max(largest, 1e-300);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > keep) kept.push_back(i);
  }
  factor_ = RealMatrix::Zero(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    factor_.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(kept[c]) * std::sqrt(lambda(kept[c]));
  }
}

ComplexMatrix GaussianMatrixSampler::from_coordinates(const RealVector& z) const {
  const Eigen::Index d2 = dim_ * dim_;
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  if (factor_.cols() == 0) return out;
  const RealVector v = factor_ * z;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    for (Eigen::Index j = 0; j < dim_; ++j) {
      out(i, j) = Complex(v(i * dim_ + j), v(d2 + i * dim_ + j));
    }
  }
  return out;
}

ComplexMatrix GaussianMatrixSampler::sample(RngStream& rng) const {
  RealVector z(factor_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return from_coordinates(z);
}

ComplexMatrix sample_ito_integral(const ItoIntegralSpec& spec, RngStream& rng) {
  const RealMatrix cov = ito_covariance(spec);
  const Eigen::Index dim = static_cast<Eigen::Index>(std::lround(std::sqrt(cov.rows() / 2.0)));
  return GaussianMatrixSampler(cov, dim).sample(rng);
}

ComplexMatrix sample_ito_substeps(const ItoIntegralSpec& spec, int m_substeps, RngStream& rng) {
  if (m_substeps < 1) throw std::invalid_argument("sample_ito_substeps: m_substeps must be >= 1");
  if (!spec.integrand) throw std::invalid_argument("sample_ito_substeps: empty integrand");
  const double dt = 1.0 / m_substeps;
  const double sd = std::sqrt(dt);
  ComplexMatrix acc;
  for (int m = 0; m < m_substeps; ++m) {
    const ComplexMatrix f = spec.integrand((m + 0.5) * dt);
    if (m == 0) acc = ComplexMatrix::Zero(f.rows(), f.cols());
    acc += (sd * rng.normal()) * f;
  }
  return acc;
}

WienerPath sample_wiener_path(int n_processes, int m_substeps, RngStream& rng) {
  if (n_processes < 0) throw std::invalid_argument("sample_wiener_path: negative process count");
  WienerPath path;
  path.substeps = m_substeps;
  path.increments.reserve(static_cast<std::size_t>(n_processes));
  for (int k = 0; k < n_processes; ++k) {
    path.increments.push_back(wiener_increments(rng, m_substeps, 1.0 / m_substeps));
  }
  return path;
}

double product_formula_error(std::span<const ComplexMatrix> a_list,
                             std::span<const ComplexMatrix> b_list, double eps) {
  if (a_list.size() != b_list.size()) {
    throw std::invalid_argument("product_formula_error: list lengths differ");
  }
  if (a_list.empty()) return 0.0;
  const Eigen::Index dim = a_list.front().rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(dim, dim);
  ComplexMatrix product = ident;
  ComplexMatrix sum_a = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix sum_b = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix comm = ComplexMatrix::Zero(dim, dim);
  for (std::size_t m = 0; m < a_list.size(); ++m) {
    const ComplexMatrix& a = a_list[m];
    const ComplexMatrix& b = b_list[m];
    product = expm(eps * b + 0.5 * eps * eps * a) * product;
    sum_a += a;
    sum_b += b;
    comm += commutator(b, sum_b);
  }
  const ComplexMatrix approx =
      expm(0.5 * eps * eps * sum_a) * expm(eps * sum_b + 0.5 * eps * eps * comm);
  return max_abs(product - approx);
}

}  // namespace noisy_gates
