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

#ifndef KRRLEV_DATAGEN_HPP
#define KRRLEV_DATAGEN_HPP

#include "krrlev/kernels.hpp"
#include "krrlev/regression.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace krrlev {

/// Input densities on [0, 1).
///   UniformGrid    x_i = (i - 1) / n
///   Arcsine        x = sin^2(pi u / 2), u ~ U(0, 1); Beta(1/2, 1/2)
///   UniformRandom  x ~ U(0, 1)
///   SymmetricBeta  x ~ Beta(a, a); a < 1 piles mass onto the borders
enum class Density { UniformGrid, Arcsine, UniformRandom, SymmetricBeta };

std::string to_string(Density density);
Density parse_density(std::string_view name);

struct SyntheticConfig {
  std::size_t n = 500;
  Density density = Density::Arcsine;
  double beta_shape = 0.5; ///< SymmetricBeta only
  int bernoulli_order = 2;
  double noise_sigma = 0.0;
  std::size_t anchors = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RegressionDataset {
  std::string name;
  PointSet points;
  Eigen::VectorXd y;
  std::optional<GroundTruth> truth; ///< synthetic data only
  KernelSpec spec;
  std::vector<std::string> feature_names;
};

/// Target function built from kernel sections at random anchors.
struct FStar {
  Eigen::VectorXd values;       ///< f*(x_i)
  Eigen::VectorXd anchors;      ///< z_k
  Eigen::VectorXd coefficients; ///< c_k
  double rkhs_norm_sq = 0.0;    ///< c^T K_z c, 1 after normalization
};

PointSet grid_points(std::size_t n);
double arcsine_transform(double u);
PointSet arcsine_points(std::size_t n, std::uint64_t seed);
PointSet uniform_points(std::size_t n, std::uint64_t seed);
PointSet symmetric_beta_points(std::size_t n, double shape, std::uint64_t seed);

/// f*(x) = sum_k c_k k(x, z_k) with z_k ~ U(0, 1), c ~ N(0, I) rescaled to
/// unit RKHS norm and signed so that c_1 > 0. Scalar inputs only. A singular
/// anchor Gram matrix is resampled once before giving up.
FStar make_f_star(const PointSet &points, const KernelSpec &spec,
                  std::size_t anchors, std::uint64_t seed);

/// Points, f*, and y = f* + sigma xi under the Bernoulli kernel of the given
/// order. A pure function of the config.
RegressionDataset synthesize(const SyntheticConfig &config);

/// Comma-separated file with a header row. Every column other than
/// `target_column` (and an optional `f_star` column) is a feature. With
/// `standardize`, features are centred and scaled to unit variance; the
/// variance is floored at 1e-12 so constant columns become zero.
RegressionDataset load_csv(const std::filesystem::path &path,
                           std::string_view target_column, bool standardize);

/// Writes features, the target as `y`, and `f_star` when ground truth is
/// known. Values use the shortest round-trip representation.
void write_csv(const RegressionDataset &dataset, const std::filesystem::path &path);

} // namespace krrlev

#endif
