/*
 * Copyright 2026 The krrlev Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "krrlev/leverage.hpp"

#include "krrlev/datagen.hpp"
#include "krrlev/sampling.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <vector>

using namespace krrlev;

namespace {

PointSet uniform_scalars(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> xs(n);
  for (auto &x : xs)
    x = uniform01(rng);
  return PointSet::from_scalars(xs);
}

} // namespace

TEST(ExactLeverage, IdentityKernel) {
  const auto s = exact_ridge_leverage(Eigen::MatrixXd::Identity(4, 4), 0.25);
  for (Eigen::Index i = 0; i < 4; ++i)
    EXPECT_NEAR(s.scores(i), 0.5, 1e-15);
  EXPECT_NEAR(s.scores.sum(), 2.0, 1e-14);
  EXPECT_EQ(s.method, ScoreMethod::Exact);
  EXPECT_NEAR(effective_dimension(Eigen::MatrixXd::Identity(4, 4), 0.25), 2.0, 1e-14);
  EXPECT_NEAR(max_dof(Eigen::MatrixXd::Identity(4, 4), 0.25), 2.0, 1e-14);
}

TEST(ExactLeverage, DiagonalKernel) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 2);
  k(0, 0) = 2.0;
  k(1, 1) = 1.0;
  const auto s = exact_ridge_leverage(k, 0.5);
  EXPECT_NEAR(s.scores(0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.scores(1), 0.5, 1e-15);
}

TEST(ExactLeverage, RejectsNonPositiveLambda) {
  EXPECT_THROW(exact_ridge_leverage(Eigen::MatrixXd::Identity(2, 2), 0.0),
               std::invalid_argument);
  EXPECT_THROW(effective_dimension(Eigen::MatrixXd::Identity(2, 2), -1.0),
               std::invalid_argument);
}

TEST(ExactLeverage, AgreesWithSolveAndInverseOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index n = 20 + static_cast<Eigen::Index>(seed) * 7;
    const Eigen::MatrixXd k = test::random_spsd(n, n / 2 + 1, seed);
    for (double lambda : {1e-4, 1e-2, 1.0}) {
      const Eigen::VectorXd l = exact_ridge_leverage(k, lambda).scores;
      EXPECT_LE((l - ridge_leverage_by_solve(k, lambda)).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((l - test::oracle_scores(k, lambda)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(ExactLeverage, RangeSumAndMax) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd k = test::random_spsd(50, 20, seed);
    const double lambda = 1e-3;
    const Eigen::VectorXd l = exact_ridge_leverage(k, lambda).scores;
    EXPECT_GE(l.minCoeff(), 0.0);
    EXPECT_LT(l.maxCoeff(), 1.0);
    const double d = effective_dimension(k, lambda);
    EXPECT_NEAR(l.sum(), d, 1e-8 * d);
    EXPECT_NEAR(max_dof(k, lambda), 50.0 * l.maxCoeff(), 1e-12);
    EXPECT_LE(d, max_dof(k, lambda) + 1e-12);
  }
}

TEST(ExactLeverage, DecreasingInLambda) {
  const Eigen::MatrixXd k = test::random_pd(30, 3);
  const Eigen::VectorXd a = exact_ridge_leverage(k, 1e-3).scores;
  const Eigen::VectorXd b = exact_ridge_leverage(k, 2e-3).scores;
  EXPECT_TRUE(((a - b).array() > 0.0).all());
  EXPECT_GT(effective_dimension(k, 1e-3), effective_dimension(k, 2e-3));
}

TEST(ExactLeverage, SpectralOverloadMatches) {
  const Eigen::MatrixXd k = test::random_pd(25, 8);
  const SpectralData sd = spectral_decomposition(k);
  EXPECT_TRUE(exact_ridge_leverage(sd, 0.01).scores.isApprox(
      exact_ridge_leverage(k, 0.01).scores));
  const Eigen::MatrixXd u = sd.eigenvectors;
  EXPECT_LE((u.transpose() * u - Eigen::MatrixXd::Identity(25, 25)).norm(), 1e-8);
  EXPECT_LE((u * sd.eigenvalues.asDiagonal() * u.transpose() - k).norm(), 1e-8 * k.norm());
}

TEST(ExactLeverage, GridScoresAreConstant) {
  for (int order = 1; order <= 3; ++order) {
    const auto pts = grid_points(64);
    const Eigen::MatrixXd k = kernel_matrix(pts, KernelSpec::bernoulli(order)).entries;
    const Eigen::VectorXd l = exact_ridge_leverage(k, 1e-6).scores;
    EXPECT_LE((l.maxCoeff() - l.minCoeff()) / l.maxCoeff(), 1e-8) << order;
  }
}

TEST(ApproxLeverage, FullSamplingMatchesExact) {
  const auto pts = uniform_scalars(60, 1);
  const auto spec = KernelSpec::rbf(0.2);
  const Eigen::MatrixXd k = kernel_matrix(pts, spec).entries;
  std::vector<std::size_t> all(60);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto approx = approx_ridge_leverage(build_sketch(pts, spec, all), 1e-3);
  EXPECT_EQ(approx.method, ScoreMethod::Approximate);
  EXPECT_LE((approx.scores - exact_ridge_leverage(k, 1e-3).scores).cwiseAbs().maxCoeff(),
            1e-8);
}

TEST(ApproxLeverage, EqualsDenseNystromScores) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pts = uniform_scalars(120, seed);
    const auto spec = KernelSpec::bernoulli(2);
    const Eigen::MatrixXd k = kernel_matrix(pts, spec).entries;
    const auto idx = sample_with_replacement(uniform_distribution(120), 15, seed + 50);
    const NystromSketch sk = build_sketch(k, idx);
    const Eigen::VectorXd want = test::oracle_scores(sketch_to_dense(sk), 1e-6);
    EXPECT_LE((approx_ridge_leverage(sk, 1e-6).scores - want).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ApproxLeverage, NeverExceedsExact) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto pts = uniform_scalars(100, seed);
    const auto spec = seed % 2 ? KernelSpec::rbf(0.1) : KernelSpec::bernoulli(1);
    const Eigen::MatrixXd k = kernel_matrix(pts, spec).entries;
    const double lambda = 1e-4;
    const Eigen::VectorXd l = exact_ridge_leverage(k, lambda).scores;
    const Eigen::VectorXd q = make_distribution(SamplerKind::Diagonal, k.diagonal());
    const auto approx = approx_ridge_leverage(pts, spec, lambda, 10 + seed % 20, q, seed);
    EXPECT_LE((approx.scores - l).maxCoeff(), 1e-8);
    EXPECT_EQ(approx.sketch_size, 10 + seed % 20);
  }
}

TEST(ApproxLeverage, AdditiveBoundAtSufficientSize) {
  const std::size_t n = 150, trials = 60;
  const double lambda = 1.0, eps = 0.4, rho = 0.3;
  const auto pts = uniform_scalars(n, 11);
  const auto spec = KernelSpec::rbf(0.1);
  const Eigen::MatrixXd k = kernel_matrix(pts, spec).entries;
  const Eigen::VectorXd l = exact_ridge_leverage(k, lambda).scores;
  const std::size_t p = sufficient_p_diagonal(k.trace(), n, lambda, eps, rho);
  const Eigen::VectorXd q = make_distribution(SamplerKind::Diagonal, k.diagonal());
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::VectorXd a = approx_ridge_leverage(pts, spec, lambda, p, q, t).scores;
    ok += (l - a).maxCoeff() <= 2.0 * eps ? 1 : 0;
  }
  const double frac = static_cast<double>(ok) / trials;
  EXPECT_GE(frac, (1 - rho) - test::binomial_slack(1 - rho, trials, 1.645));
}

TEST(ApproxLeverage, MultiplicativeBoundWhenSmallestEigenvalueDominates) {
  // sigma_n > n lambda eps holds here by construction.
  const Eigen::Index n = 40;
  const double lambda = 1e-3, eps = 0.4, rho = 0.3;
  const Eigen::MatrixXd k = test::random_pd(n, 21, 1.0);
  const double sn = spectral_decomposition(k).eigenvalues.minCoeff();
  const double nle = static_cast<double>(n) * lambda * eps;
  ASSERT_GT(sn, nle);
  const Eigen::VectorXd l = exact_ridge_leverage(k, lambda).scores;
  const double factor = (sn - nle) / (sn + nle);
  const std::size_t p = sufficient_p_diagonal(k.trace(), static_cast<std::size_t>(n),
                                               lambda, eps, rho);
  const Eigen::VectorXd q = make_distribution(SamplerKind::Diagonal, k.diagonal());
  const std::size_t trials = 50;
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto idx = sample_with_replacement(q, p, t);
    const Eigen::VectorXd a = approx_ridge_leverage(build_sketch(k, idx), lambda).scores;
    ok += ((a - factor * l).minCoeff() >= -1e-12) ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(ok) / trials,
            (1 - rho) - test::binomial_slack(1 - rho, trials, 1.645));
}
