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

#ifndef KRRLEV_BOUNDS_HPP
#define KRRLEV_BOUNDS_HPP

#include "krrlev/linalg.hpp"
#include "krrlev/sketch.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace krrlev {

/// Outcome of testing a realized sketch against the structural bias
/// condition lambda_max(D) <= t, D = Phi - Phi^{1/2} U^T S S^T U Phi^{1/2},
/// Phi = Sigma (Sigma + n gamma I)^{-1}.
struct DeviationCheck {
  double gamma = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  double lambda_max_D = 0.0; ///< signed
  bool condition_met = false; ///< lambda_max_D <= t
  bool gamma_admissible = false; ///< gamma <= (1 - t) lambda
  /// (1 - (gamma / lambda) / (1 - t))^{-1}; set only when both flags hold
  /// and the factor is finite.
  std::optional<double> inflation;
};

struct TailExperiment {
  std::vector<double> t_grid;
  std::size_t trials = 0;
  std::size_t p = 0;
  std::vector<double> empirical; ///< fraction of trials with deviation >= t
  std::vector<double> bound;     ///< Bernstein right-hand side (may exceed 1)
  double beta_used = 0.0;
  double lambda_max_psi = 0.0;
  double frob_sq = 0.0;
};

/// Psi = Phi^{1/2} U^T. Column i has squared norm l_i(gamma) and
/// ||Psi||_F^2 = d_eff(gamma).
Eigen::MatrixXd psi_matrix(const SpectralData &spectral, double gamma);

/// lambda_max(Psi Psi^T - Psi S S^T Psi^T); may be negative.
double deviation_lambda_max(const Eigen::MatrixXd &psi, const SketchingMatrix &s);

/// n exp(-(p t^2 / 2) / (lmax (frob_sq / beta + t / 3))).
double bernstein_bound(std::size_t p, double t, double lmax, double frob_sq,
                       double beta, std::size_t n);

/// Monte-Carlo tail of the deviation paired with the Bernstein bound. Trial k
/// draws its p columns from make_rng(seed, k); beta is the realized
/// beta_factor of `probabilities` against the column norms of Psi.
TailExperiment empirical_tail(const Eigen::MatrixXd &psi,
                              const Eigen::VectorXd &probabilities,
                              std::size_t p, const std::vector<double> &t_grid,
                              std::size_t trials, std::uint64_t seed);

/// (1 - (gamma / lambda) / (1 - t))^{-1}, or nullopt when the factor is not
/// finite and positive.
std::optional<double> inflation_factor(double gamma, double lambda, double t);

DeviationCheck deviation_matrix_check(const SpectralData &spectral,
                                      const SketchingMatrix &s, double gamma,
                                      double t, double lambda);

} // namespace krrlev

#endif
