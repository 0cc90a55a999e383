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

#ifndef KRRLEV_REGRESSION_HPP
#define KRRLEV_REGRESSION_HPP

#include "krrlev/linalg.hpp"
#include "krrlev/sketch.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace krrlev {

enum class KernelSource { Full, Nystrom };

struct KrrModel {
  Eigen::VectorXd alpha;  ///< (M + n lambda I)^{-1} y
  double lambda = 0.0;
  Eigen::VectorXd fitted; ///< M alpha at the training points
  KernelSource kernel_source = KernelSource::Full;
};

/// Noise model y = f* + sigma * xi, xi standard normal. The variance term
/// of the risk therefore carries sigma^2.
struct GroundTruth {
  Eigen::VectorXd f_star;
  double sigma_sq = 0.0;

  void validate() const;
};

/// Fixed-design risk (1/n) E ||f_hat - f*||^2 = bias_sq + variance.
struct RiskReport {
  double bias_sq = 0.0;
  double variance = 0.0;
  double total = 0.0;
  double noise_sigma_sq = 0.0;
  double lambda = 0.0;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

/// alpha = (K + n lambda I)^{-1} y by Cholesky; O(n^3).
KrrModel krr_fit(const Eigen::MatrixXd &k, const Eigen::VectorXd &y,
                 double lambda);

/// Fit with L = B B^T via the matrix inversion lemma:
///   L (L + n lambda I)^{-1} y = B (B^T B + n lambda I)^{-1} B^T y.
/// O(n r^2 + r^3); L is never formed.
KrrModel krr_fit_nystrom(const NystromSketch &sketch, const Eigen::VectorXd &y,
                         double lambda);

/// n lambda^2 ||(M + n lambda I)^{-1} f*||^2.
double bias_squared(const Eigen::MatrixXd &m, const GroundTruth &truth,
                    double lambda);

/// (sigma^2 / n) sum_j (s_j / (s_j + n lambda))^2 over the eigenvalues of M.
double variance_term(const Eigen::MatrixXd &m, double sigma_sq, double lambda);

RiskReport analytic_risk(const Eigen::MatrixXd &m, const GroundTruth &truth,
                         double lambda);
RiskReport analytic_risk(const SpectralData &spectral, const GroundTruth &truth,
                         double lambda);
/// Risk of the Nystrom estimator computed in the factor space of the sketch.
RiskReport analytic_risk(const NystromSketch &sketch, const GroundTruth &truth,
                         double lambda);

/// Average of (1/n) ||M (M + n lambda I)^{-1} (f* + sigma xi) - f*||^2 over
/// `trials` noise draws. Trial t draws xi from make_rng(seed, t) and the
/// mean is accumulated in trial order.
MonteCarloEstimate monte_carlo_risk(const Eigen::MatrixXd &m,
                                    const GroundTruth &truth, double lambda,
                                    std::size_t trials, std::uint64_t seed);

} // namespace krrlev

#endif
