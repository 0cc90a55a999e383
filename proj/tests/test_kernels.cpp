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

#include "krrlev/kernels.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace krrlev;

namespace {

PointSet random_scalars(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<double> xs(n);
  for (auto &x : xs)
    x = uniform01(rng);
  return PointSet::from_scalars(xs);
}

PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  const Eigen::MatrixXd g = test::gaussian_matrix(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(d), seed);
  return PointSet(PointMatrix(g));
}

} // namespace

TEST(KernelSpec, RejectsBadHyperparameters) {
  EXPECT_THROW(KernelSpec::rbf(0.0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::rbf(-1.0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::bernoulli(0), std::invalid_argument);
  EXPECT_THROW(KernelSpec::bernoulli(11), std::invalid_argument);
  EXPECT_NO_THROW(KernelSpec::bernoulli(10));
}

TEST(PointSet, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(PointSet::from_scalars(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(PointSet::from_scalars(std::vector<double>{0.1, NAN}),
               std::invalid_argument);
}

// B_2 = t^2 - t + 1/6 and B_4 = t^4 - 2t^3 + t^2 - 1/30 worked out by hand
// from B_n' = n B_{n-1} and zero mean on [0, 1].
TEST(Bernoulli, LowOrderCoefficients) {
  const auto b2 = bernoulli_polynomial_coefficients(2);
  ASSERT_EQ(b2.size(), 3u);
  EXPECT_NEAR(static_cast<double>(b2[0]), 1.0 / 6.0, 1e-16);
  EXPECT_NEAR(static_cast<double>(b2[1]), -1.0, 1e-16);
  EXPECT_NEAR(static_cast<double>(b2[2]), 1.0, 1e-16);

  const auto b4 = bernoulli_polynomial_coefficients(4);
  const std::vector<double> want{-1.0 / 30.0, 0.0, 1.0, -2.0, 1.0};
  ASSERT_EQ(b4.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    EXPECT_NEAR(static_cast<double>(b4[i]), want[i], 1e-16) << i;
}

TEST(Bernoulli, ConstantTermsMatchBernoulliNumbers) {
  // B_20 = -174611/330, B_12 = -691/2730.
  EXPECT_NEAR(bernoulli_polynomial(20, 0.0), -174611.0 / 330.0, 1e-10);
  EXPECT_NEAR(bernoulli_polynomial(12, 0.0), -691.0 / 2730.0, 1e-14);
}

TEST(Bernoulli, ZeroMeanOnUnitInterval) {
  for (int deg = 1; deg <= kMaxBernoulliDegree; ++deg) {
    // Simpson's rule on a fine grid; exact enough for these polynomials.
    const int m = 2000;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double t = static_cast<double>(i) / m;
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * bernoulli_polynomial(deg, t);
    }
    s /= 3.0 * m;
    EXPECT_NEAR(s, 0.0, 1e-9) << "degree " << deg;
  }
}

TEST(Frac, MapsIntoUnitInterval) {
  EXPECT_DOUBLE_EQ(frac(1.25), 0.25);
  EXPECT_DOUBLE_EQ(frac(-0.25), 0.75);
  EXPECT_DOUBLE_EQ(frac(3.0), 0.0);
  EXPECT_LT(frac(-1e-18), 1.0);
}

TEST(EvalKernel, ReferenceValues) {
  const std::vector<double> a{1.0, 2.0};
  EXPECT_DOUBLE_EQ(eval_kernel(KernelSpec::linear(), a, a), 5.0);
  EXPECT_DOUBLE_EQ(eval_kernel(KernelSpec::rbf(1.0), a, a), 1.0);

  const std::vector<double> half{0.5}, zero{0.0};
  EXPECT_NEAR(eval_kernel(KernelSpec::bernoulli(1), half, zero), -1.0 / 24.0, 1e-15);
  EXPECT_NEAR(eval_kernel(KernelSpec::bernoulli(1), zero, zero), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(eval_kernel(KernelSpec::bernoulli(2), zero, zero), 1.0 / 720.0, 1e-15);
}

TEST(EvalKernel, RbfConvention) {
  const std::vector<double> x{0.0, 0.0}, y{3.0, 4.0};
  EXPECT_NEAR(eval_kernel(KernelSpec::rbf(2.0), x, y), std::exp(-25.0 / 8.0), 1e-15);
}

TEST(EvalKernel, BernoulliIsPeriodic) {
  Rng rng = make_rng(5);
  for (int order = 1; order <= 4; ++order) {
    const auto spec = KernelSpec::bernoulli(order);
    for (int i = 0; i < 50; ++i) {
      const double x = uniform01(rng), y = uniform01(rng);
      const std::vector<double> xs{x}, xs1{x + 1.0}, ys{y};
      EXPECT_NEAR(eval_kernel(spec, xs, ys), eval_kernel(spec, xs1, ys), 1e-12);
    }
  }
}

TEST(EvalKernel, DimensionMismatchThrows) {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  EXPECT_THROW(eval_kernel(KernelSpec::linear(), a, b), std::invalid_argument);
  EXPECT_THROW(eval_kernel(KernelSpec::bernoulli(1), a, a), std::invalid_argument);
}

TEST(KernelMatrix, SmallCases) {
  const auto one = PointSet::from_scalars(std::vector<double>{0.3});
  const auto k1 = kernel_matrix(one, KernelSpec::rbf(0.7));
  ASSERT_EQ(k1.size(), 1);
  EXPECT_DOUBLE_EQ(k1.entries(0, 0), 1.0);

  PointMatrix ortho(3, 3);
  ortho << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const auto kl = kernel_matrix(PointSet(ortho), KernelSpec::linear());
  EXPECT_TRUE(kl.entries.isApprox(Eigen::MatrixXd::Identity(3, 3)));

  const auto dup = PointSet::from_scalars(std::vector<double>{0.0, 0.0});
  EXPECT_TRUE(kernel_matrix(dup, KernelSpec::rbf(1.0))
                  .entries.isApprox(Eigen::MatrixXd::Ones(2, 2)));
}

TEST(KernelMatrix, ExactlySymmetricAndPsd) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto xs = random_scalars(120, seed);
    const auto pts = random_points(120, 3, seed + 100);
    const std::vector<std::pair<KernelSpec, const PointSet *>> cases{
        {KernelSpec::linear(), &pts},
        {KernelSpec::rbf(0.8), &pts},
        {KernelSpec::bernoulli(1), &xs},
        {KernelSpec::bernoulli(3), &xs}};
    for (const auto &[spec, p] : cases) {
      const Eigen::MatrixXd k = kernel_matrix(*p, spec).entries;
      EXPECT_EQ((k - k.transpose()).cwiseAbs().maxCoeff(), 0.0);
      const double hi = test::max_eig(k);
      EXPECT_GE(test::min_eig(k), -1e-10 * hi) << spec.describe();
    }
  }
}

TEST(KernelColumns, BitwiseEqualToFullMatrix) {
  const auto xs = random_scalars(40, 9);
  for (const auto &spec : {KernelSpec::bernoulli(2), KernelSpec::rbf(0.3)}) {
    const Eigen::MatrixXd k = kernel_matrix(xs, spec).entries;
    const std::vector<std::size_t> idx{7, 0, 39, 7, 12};
    const Eigen::MatrixXd c = kernel_columns(xs, idx, spec);
    for (std::size_t j = 0; j < idx.size(); ++j)
      for (Eigen::Index i = 0; i < k.rows(); ++i)
        EXPECT_EQ(c(i, static_cast<Eigen::Index>(j)),
                  k(i, static_cast<Eigen::Index>(idx[j])));

    std::vector<std::size_t> all(40);
    for (std::size_t i = 0; i < all.size(); ++i)
      all[i] = i;
    EXPECT_EQ((kernel_columns(xs, all, spec) - k).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(KernelColumns, LinearIdentityColumn) {
  PointMatrix eye(2, 2);
  eye << 1, 0, 0, 1;
  const std::vector<std::size_t> idx{0};
  const Eigen::MatrixXd c = kernel_columns(PointSet(eye), idx, KernelSpec::linear());
  EXPECT_EQ(c(0, 0), 1.0);
  EXPECT_EQ(c(1, 0), 0.0);
}

TEST(KernelColumns, OutOfRangeIndexThrows) {
  const auto xs = random_scalars(5, 1);
  const std::vector<std::size_t> idx{5};
  EXPECT_THROW(kernel_columns(xs, idx, KernelSpec::bernoulli(1)), std::out_of_range);
}

TEST(KernelDiagonal, PerFamily) {
  const auto pts = random_points(10, 2, 3);
  EXPECT_TRUE(kernel_diagonal(pts, KernelSpec::rbf(0.1)).isApprox(Eigen::VectorXd::Ones(10)));
  const Eigen::VectorXd norms = pts.matrix().rowwise().squaredNorm();
  EXPECT_TRUE(kernel_diagonal(pts, KernelSpec::linear()).isApprox(norms, 1e-14));
  const auto xs = random_scalars(10, 4);
  const Eigen::VectorXd d = kernel_diagonal(xs, KernelSpec::bernoulli(1));
  for (Eigen::Index i = 0; i < d.size(); ++i)
    EXPECT_NEAR(d(i), 1.0 / 12.0, 1e-15);
}
