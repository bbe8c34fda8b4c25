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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noisy_gates/stochastic.hpp"

namespace ng = noisy_gates;
using ng::ComplexMatrix;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

// Index of Re I_ij in the stacked covariance (2x2, row-major).
int re_index(int i, int j) { return 2 * i + j; }
int im_index(int i, int j) { return 4 + 2 * i + j; }

}  // namespace

TEST(Stochastic, StreamsAreReproducibleAndDistinct) {
  ng::RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
    EXPECT_NE(x, d.normal());
  }
  ng::RngStream parent(5, 1);
  auto s1 = parent.substream(3);
  auto s2 = ng::RngStream(5, 1).substream(3);
  EXPECT_EQ(s1.uniform(), s2.uniform());
  EXPECT_NE(ng::mix_seed(1, 2), ng::mix_seed(2, 1));
}

TEST(Stochastic, WienerIncrementMoments) {
  ng::RngStream rng(1, 0);
  const auto w = ng::wiener_increments(rng, 1000000, 1.0);
  double mean = 0.0;
  for (double x : w) mean += x;
  mean /= static_cast<double>(w.size());
  EXPECT_NEAR(mean, 0.0, 0.004);

  ng::RngStream rng2(2, 0);
  const auto v = ng::wiener_increments(rng2, 1000000, 0.25);
  double m2 = 0.0;
  for (double x : v) m2 += x * x;
  EXPECT_NEAR(m2 / static_cast<double>(v.size()), 0.25, 0.002);

  ng::RngStream r1(9, 9), r2(9, 9);
  EXPECT_EQ(ng::wiener_increments(r1, 50, 0.1), ng::wiener_increments(r2, 50, 0.1));
  ng::RngStream r3(9, 9);
  EXPECT_THROW(ng::wiener_increments(r3, 5, -1.0), std::invalid_argument);
}

TEST(Stochastic, GaussLegendreIntegratesPolynomialsExactly) {
  for (int nodes : {16, 32, 48, 128}) {
    const auto rule = ng::gauss_legendre_panels(nodes);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(nodes));
    double w = 0.0, s7 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      w += rule.weights[i];
      s7 += rule.weights[i] * std::pow(rule.nodes[i], 7);
    }
    EXPECT_NEAR(w, 1.0, 1e-14);
    EXPECT_NEAR(s7, 1.0 / 8.0, 1e-14);
  }
  EXPECT_THROW(ng::gauss_legendre_panels(10), std::invalid_argument);
}

TEST(Stochastic, ItoCovarianceExamples) {
  const auto c1 = ng::ito_covariance({[](double) { return pauli_x(); }});
  EXPECT_NEAR(c1(re_index(0, 1), re_index(0, 1)), 1.0, 1e-14);
  for (int k = 4; k < 8; ++k) EXPECT_NEAR(c1(re_index(0, 1), k), 0.0, 1e-15);

  const auto c2 = ng::ito_covariance({[](double s) { return ComplexMatrix(std::exp(-s / 2) * sigma_plus()); }});
  EXPECT_NEAR(c2(re_index(0, 1), re_index(0, 1)), 1.0 - std::exp(-1.0), 1e-14);

  const auto c3 = ng::ito_covariance({[](double s) { return ComplexMatrix(std::cos(M_PI * s) * pauli_x()); }});
  EXPECT_NEAR(c3(re_index(0, 1), re_index(0, 1)), 0.5, 1e-14);

  // Imaginary integrand lands in the imaginary block.
  const auto c4 = ng::ito_covariance({[](double) { return ComplexMatrix(ng::kI * sigma_plus()); }});
  EXPECT_NEAR(c4(im_index(0, 1), im_index(0, 1)), 1.0, 1e-14);
  EXPECT_NEAR(c4(re_index(0, 1), re_index(0, 1)), 0.0, 1e-15);
}

TEST(Stochastic, IndependentProcessesAddCovariances) {
  std::vector<ng::ItoIntegralSpec> specs = {{[](double) { return pauli_x(); }},
                                            {[](double s) { return ComplexMatrix(s * sigma_plus()); }}};
  const auto sum = ng::ito_covariance(specs);
  const auto a = ng::ito_covariance(specs[0]);
  const auto b = ng::ito_covariance(specs[1]);
  EXPECT_LT((sum - a - b).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Stochastic, SampledIntegralVariance) {
  const ng::ItoIntegralSpec spec{[](double) { return ComplexMatrix(ComplexMatrix::Identity(2, 2)); }};
  ng::RngStream rng(17, 0);
  const int n = 100000;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix x = ng::sample_ito_integral(spec, rng);
    EXPECT_LT(std::abs(x(0, 0) - x(1, 1)), 1e-12);
    EXPECT_LT(std::abs(x(0, 0).imag()), 1e-12);
    m2 += std::norm(x(0, 0));
  }
  EXPECT_NEAR(m2 / n, 1.0, 0.02);

  const ng::ItoIntegralSpec zero{[](double) { return ComplexMatrix(ComplexMatrix::Zero(2, 2)); }};
  EXPECT_EQ(ng::sample_ito_integral(zero, rng).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(ng::sample_ito_substeps(zero, 16, rng).cwiseAbs().maxCoeff(), 0.0);
}

// The exact sampler and the substep oracle share a distribution.
TEST(Stochastic, SubstepOracleMatchesCovariance) {
  const ng::ItoIntegralSpec spec{[](double s) { return ComplexMatrix(std::exp(-s / 2) * sigma_plus()); }};
  ng::RngStream rng(23, 0);
  const int n = 40000;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) m2 += std::norm(ng::sample_ito_substeps(spec, 64, rng)(0, 1));
  // Left-point sum of e^{-s} over 64 cells, exact to O(1/M).
  double expected = 0.0;
  for (int m = 0; m < 64; ++m) expected += std::exp(-(m + 0.5) / 64.0) / 64.0;
  EXPECT_NEAR(m2 / n, expected, 4.0 * expected * std::sqrt(2.0 / n));
}

TEST(Stochastic, SamplerRejectsIndefiniteCovariance) {
  ng::RealMatrix c = ng::RealMatrix::Identity(8, 8);
  c(0, 0) = -0.5;
  EXPECT_THROW(ng::GaussianMatrixSampler(c, 2), std::domain_error);
  c(0, 0) = -1e-14;  // round-off is clamped
  EXPECT_NO_THROW(ng::GaussianMatrixSampler(c, 2));
}

TEST(Stochastic, ProductFormulaExamples) {
  std::vector<ComplexMatrix> zeros(4, ComplexMatrix::Zero(2, 2));
  EXPECT_EQ(ng::product_formula_error(zeros, zeros, 0.3), 0.0);

  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd;
  auto rnd = [&] {
    ComplexMatrix m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = {nd(gen), nd(gen)};
    return m;
  };
  std::vector<ComplexMatrix> a1{rnd()}, b1{rnd()};
  const double e1 = ng::product_formula_error(a1, b1, 0.02);
  const double e2 = ng::product_formula_error(a1, b1, 0.01);
  EXPECT_NEAR(e1 / e2, 8.0, 0.8);

  std::vector<ComplexMatrix> a, b;
  for (int m = 0; m < 8; ++m) {
    a.push_back(rnd());
    b.push_back(rnd());
  }
  std::vector<double> eps{0.2, 0.1, 0.05}, err;
  for (double e : eps) err.push_back(ng::product_formula_error(a, b, e));
  const double slope1 = std::log(err[0] / err[1]) / std::log(2.0);
  const double slope2 = std::log(err[1] / err[2]) / std::log(2.0);
  EXPECT_GE(0.5 * (slope1 + slope2), 2.7);
}
