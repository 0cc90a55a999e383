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

#include "krrlev/datagen.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/leverage.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

using namespace krrlev;

namespace {

std::filesystem::path temp_path(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "krrlev_datagen_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path &p, const std::string &text) {
  std::ofstream(p) << text;
}

} // namespace

TEST(Grid, SmallExample) {
  const auto g = grid_points(4);
  const std::vector<double> want{0.0, 0.25, 0.5, 0.75};
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_DOUBLE_EQ(g.point(i)[0], want[i]);
  EXPECT_THROW(grid_points(1), std::invalid_argument);
}

TEST(Grid, BernoulliGramIsCirculant) {
  const std::size_t n = 50;
  for (int order = 1; order <= 3; ++order) {
    const Eigen::MatrixXd k = kernel_matrix(grid_points(n), KernelSpec::bernoulli(order)).entries;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                    k(0, static_cast<Eigen::Index>((j + n - i) % n)), 1e-12);
  }
}

TEST(Grid, SynthesizedGridHasFlatScores) {
  SyntheticConfig cfg;
  cfg.n = 100;
  cfg.density = Density::UniformGrid;
  const auto ds = synthesize(cfg);
  const Eigen::VectorXd l =
      exact_ridge_leverage(kernel_matrix(ds.points, ds.spec).entries, 1e-6).scores;
  EXPECT_LE((l.maxCoeff() - l.minCoeff()) / l.maxCoeff(), 1e-8);
}

TEST(Arcsine, TransformSymmetryPoint) {
  EXPECT_NEAR(arcsine_transform(0.5), 0.5, 1e-15);
  EXPECT_EQ(arcsine_transform(0.0), 0.0);
}

TEST(Arcsine, DistributionShape) {
  const std::size_t n = 100000;
  const auto pts = arcsine_points(n, 3);
  double below_half = 0, middle = 0, ends = 0, sum = 0, sumsq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts.point(i)[0];
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    below_half += x <= 0.5;
    middle += (x > 0.4 && x < 0.6);
    ends += (x < 0.2 || x > 0.8);
    sum += x;
    sumsq += x * x;
  }
  // CDF (2/pi) asin(sqrt(x)) is 1/2 at x = 1/2; variance of the law is 1/8.
  EXPECT_NEAR(below_half / n, 0.5, 3.0 * std::sqrt(0.25 / n));
  EXPECT_LT(middle, ends);
  const auto cdf = [](double x) { return 2.0 / std::numbers::pi * std::asin(std::sqrt(x)); };
  const double mid_mass = cdf(0.6) - cdf(0.4);
  EXPECT_NEAR(middle / n, mid_mass, 3.0 * std::sqrt(mid_mass * (1 - mid_mass) / n));
  EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(0.125 / n));
  (void)sumsq;
}

TEST(SymmetricBeta, MeanAndEndpointMass) {
  const std::size_t n = 20000;
  const auto pts = symmetric_beta_points(n, 0.05, 8);
  double sum = 0, near_ends = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts.point(i)[0];
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    sum += x;
    near_ends += (x < 0.05 || x > 0.95);
  }
  // Var of Beta(a, a) is 1 / (4 (2a + 1)).
  EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(0.25 / 1.1 / n));
  EXPECT_GT(near_ends / n, 0.8);
  EXPECT_THROW(symmetric_beta_points(10, 0.0, 1), std::invalid_argument);
}

TEST(FStar, SingleAnchorIsNormalizedKernelSection) {
  const auto pts = uniform_points(30, 2);
  const auto spec = KernelSpec::bernoulli(2);
  const FStar f = make_f_star(pts, spec, 1, 4);
  ASSERT_EQ(f.anchors.size(), 1);
  const double z = f.anchors(0);
  const std::vector<double> zv{z};
  const double kzz = eval_kernel(spec, zv, zv);
  for (std::size_t i = 0; i < pts.size(); ++i)
    EXPECT_NEAR(f.values(static_cast<Eigen::Index>(i)),
                eval_kernel(spec, pts.point(i), zv) / std::sqrt(kzz), 1e-12);
}

TEST(FStar, UnitNormAndReproducible) {
  const auto pts = arcsine_points(40, 5);
  const auto spec = KernelSpec::bernoulli(1);
  const FStar a = make_f_star(pts, spec, 10, 6);
  const FStar b = make_f_star(pts, spec, 10, 6);
  EXPECT_EQ(a.values, b.values);
  const auto z = PointSet::from_scalars(
      std::span<const double>(a.anchors.data(), static_cast<std::size_t>(a.anchors.size())));
  const Eigen::MatrixXd kz = kernel_matrix(z, spec).entries;
  EXPECT_NEAR(a.coefficients.dot(kz * a.coefficients), 1.0, 1e-10);
  EXPECT_NEAR(a.rkhs_norm_sq, 1.0, 1e-10);
}

TEST(Synthesize, NoiselessTargetsEqualTruth) {
  SyntheticConfig cfg;
  cfg.n = 50;
  const auto ds = synthesize(cfg);
  ASSERT_TRUE(ds.truth.has_value());
  EXPECT_EQ(ds.y, ds.truth->f_star);
  EXPECT_EQ(ds.truth->sigma_sq, 0.0);
}

TEST(Synthesize, NoiseStatistics) {
  SyntheticConfig cfg;
  cfg.n = 20000;
  cfg.noise_sigma = 0.5;
  cfg.density = Density::UniformRandom;
  const auto ds = synthesize(cfg);
  const Eigen::VectorXd e = ds.y - ds.truth->f_star;
  const double n = static_cast<double>(cfg.n);
  EXPECT_NEAR(e.mean(), 0.0, 3 * 0.5 / std::sqrt(n));
  EXPECT_NEAR(e.squaredNorm() / n, 0.25, 0.02);
  EXPECT_DOUBLE_EQ(ds.truth->sigma_sq, 0.25);
}

TEST(Synthesize, PureFunctionOfConfig) {
  SyntheticConfig cfg;
  cfg.n = 80;
  cfg.noise_sigma = 0.1;
  cfg.seed = 12;
  const auto a = synthesize(cfg);
  const auto b = synthesize(cfg);
  EXPECT_EQ(a.points.matrix(), b.points.matrix());
  EXPECT_EQ(a.y, b.y);
  cfg.seed = 13;
  EXPECT_NE(synthesize(cfg).y, a.y);
}

TEST(Synthesize, ArcsineProfilePeaksInCenter) {
  SyntheticConfig cfg;
  cfg.n = 500;
  cfg.density = Density::Arcsine;
  cfg.bernoulli_order = 2;
  const auto ds = synthesize(cfg);
  const Eigen::VectorXd l =
      exact_ridge_leverage(kernel_matrix(ds.points, ds.spec).entries, 1e-6).scores;
  double center = 0, border = 0;
  int nc = 0, nb = 0;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double x = ds.points.point(i)[0];
    if (x > 0.4 && x < 0.6) {
      center += l(static_cast<Eigen::Index>(i));
      ++nc;
    } else if (x < 0.05 || x > 0.95) {
      border += l(static_cast<Eigen::Index>(i));
      ++nb;
    }
  }
  ASSERT_GT(nc, 0);
  ASSERT_GT(nb, 0);
  EXPECT_GT(center / nc, border / nb);
}

TEST(SyntheticConfig, Validation) {
  SyntheticConfig cfg;
  cfg.n = 1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.n = 10;
  cfg.noise_sigma = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.noise_sigma = 0;
  cfg.anchors = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Density, NamesRoundTrip) {
  for (auto d : {Density::UniformGrid, Density::Arcsine, Density::UniformRandom,
                 Density::SymmetricBeta})
    EXPECT_EQ(parse_density(to_string(d)), d);
  EXPECT_THROW(parse_density("normal"), std::invalid_argument);
}

TEST(Csv, LoadsSmallFile) {
  const auto p = temp_path("small.csv");
  write_text(p, "a,b,target\n1,2,3\n4,5,6\n7,8,9\n");
  const auto ds = load_csv(p, "target", false);
  EXPECT_EQ(ds.points.size(), 3u);
  EXPECT_EQ(ds.points.dim(), 2u);
  EXPECT_EQ(ds.y, Eigen::Vector3d(3, 6, 9));
  EXPECT_EQ(ds.points.point(2)[1], 8.0);
  EXPECT_FALSE(ds.truth.has_value());
  EXPECT_EQ(ds.spec.family, KernelFamily::Linear);
}

TEST(Csv, StandardizeConstantColumnIsZero) {
  const auto p = temp_path("const.csv");
  write_text(p, "a,b,y\n5,1,0\n5,2,1\n5,3,2\n");
  const auto ds = load_csv(p, "y", true);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(ds.points.point(i)[0], 0.0);
  EXPECT_NEAR(ds.points.matrix().col(1).mean(), 0.0, 1e-15);
  EXPECT_NEAR(ds.points.matrix().col(1).squaredNorm() / 3.0, 1.0, 1e-14);
}

TEST(Csv, Errors) {
  EXPECT_THROW(load_csv(temp_path("missing.csv"), "y", false), IoError);
  const auto p = temp_path("bad.csv");
  write_text(p, "a,y\n1,2\nx,3\n");
  try {
    load_csv(p, "y", false);
    FAIL() << "expected IoError";
  } catch (const IoError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'a'"), std::string::npos) << msg;
  }
  write_text(p, "a,b\n1,2\n3,4\n");
  EXPECT_THROW(load_csv(p, "y", false), IoError);
  write_text(p, "a,y\n1,2\n");
  EXPECT_THROW(load_csv(p, "y", false), IoError);
}

TEST(Csv, RoundTripPreservesValues) {
  SyntheticConfig cfg;
  cfg.n = 64;
  cfg.noise_sigma = 0.3;
  cfg.density = Density::Arcsine;
  const auto ds = synthesize(cfg);
  const auto p = temp_path("roundtrip.csv");
  write_csv(ds, p);
  const auto back = load_csv(p, "y", false);
  ASSERT_TRUE(back.truth.has_value());
  for (Eigen::Index i = 0; i < ds.y.size(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    EXPECT_NEAR(back.points.point(u)[0], ds.points.point(u)[0],
                1e-15 * std::abs(ds.points.point(u)[0]));
    EXPECT_NEAR(back.y(i), ds.y(i), 1e-15 * std::abs(ds.y(i)));
    EXPECT_NEAR(back.truth->f_star(i), ds.truth->f_star(i),
                1e-15 * std::abs(ds.truth->f_star(i)));
  }
}
