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

#ifndef KRRLEV_LEVERAGE_HPP
#define KRRLEV_LEVERAGE_HPP

#include "krrlev/kernels.hpp"
#include "krrlev/linalg.hpp"
#include "krrlev/sketch.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace krrlev {

enum class ScoreMethod { Exact, Approximate };

/// Ridge leverage scores l_i(lambda) = [K (K + n lambda I)^{-1}]_ii.
struct LeverageScores {
  Eigen::VectorXd scores;
  double lambda = 0.0;
  ScoreMethod method = ScoreMethod::Exact;
  std::size_t sketch_size = 0; ///< number of draws; Approximate only
};

/// Spectral route: l_i = sum_j s_j / (s_j + n lambda) U_ij^2.
LeverageScores exact_ridge_leverage(const Eigen::MatrixXd &k, double lambda);
LeverageScores exact_ridge_leverage(const SpectralData &spectral, double lambda);

/// Cross-check route: diag((K + n lambda I)^{-1} K) through a Cholesky solve.
Eigen::VectorXd ridge_leverage_by_solve(const Eigen::MatrixXd &k, double lambda);

/// l~_i = B_i^T (B^T B + n lambda I)^{-1} B_i for every row of the sketch
/// factor. O(n r^2 + r^3).
LeverageScores approx_ridge_leverage(const NystromSketch &sketch, double lambda);

/// Samples p columns with replacement from `probabilities`, builds the
/// Nystrom sketch from kernel columns and returns the approximate scores.
/// The n x n kernel matrix is never formed.
LeverageScores approx_ridge_leverage(const PointSet &points,
                                     const KernelSpec &spec, double lambda,
                                     std::size_t p,
                                     const Eigen::VectorXd &probabilities,
                                     std::uint64_t seed);

/// d_eff = Tr(K (K + n lambda I)^{-1}).
double effective_dimension(const Eigen::MatrixXd &k, double lambda);
double effective_dimension(const SpectralData &spectral, double lambda);

/// d_mof = n max_i l_i(lambda).
double max_dof(const Eigen::MatrixXd &k, double lambda);
double max_dof(const SpectralData &spectral, double lambda);

} // namespace krrlev

#endif
