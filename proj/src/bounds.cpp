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

#include "krrlev/bounds.hpp"

#include "krrlev/rng.hpp"
#include "krrlev/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace krrlev {

Eigen::MatrixXd psi_matrix(const SpectralData &spectral, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("psi_matrix: gamma must be positive");
  if (!spectral.eigenvalues.allFinite() || !spectral.eigenvectors.allFinite())
    throw std::invalid_argument("psi_matrix: non-finite spectral data");
  const double ng = static_cast<double>(spectral.size()) * gamma;
  const Eigen::VectorXd root_phi =
      (spectral.eigenvalues.array() / (spectral.eigenvalues.array() + ng)).sqrt();
  return root_phi.asDiagonal() * spectral.eigenvectors.transpose();
}

double deviation_lambda_max(const Eigen::MatrixXd &psi, const SketchingMatrix &s) {
  if (static_cast<std::size_t>(psi.cols()) != s.rows)
    throw std::invalid_argument("deviation_lambda_max: dimension mismatch");
  Eigen::MatrixXd psi_s(psi.rows(), static_cast<Eigen::Index>(s.cols()));
  for (std::size_t j = 0; j < s.cols(); ++j)
    psi_s.col(static_cast<Eigen::Index>(j)) =
        s.weights[j] * psi.col(static_cast<Eigen::Index>(s.sampled_rows[j]));
  Eigen::MatrixXd dev = psi * psi.transpose() - psi_s * psi_s.transpose();
  dev = 0.5 * (dev + dev.transpose()).eval();
  return lambda_max(dev);
}

double bernstein_bound(std::size_t p, double t, double lmax, double frob_sq,
                       double beta, std::size_t n) {
  if (p == 0 || n == 0)
    throw std::invalid_argument("bernstein_bound: p and n must be positive");
  if (!(t > 0.0) || !(lmax > 0.0) || !(frob_sq > 0.0))
    throw std::invalid_argument("bernstein_bound: t, lmax, frob_sq must be positive");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("bernstein_bound: beta must be in (0, 1]");
  const double exponent = -(static_cast<double>(p) * t * t / 2.0) /
                          (lmax * (frob_sq / beta + t / 3.0));
  return static_cast<double>(n) * std::exp(exponent);
}

TailExperiment empirical_tail(const Eigen::MatrixXd &psi,
                              const Eigen::VectorXd &probabilities,
                              std::size_t p, const std::vector<double> &t_grid,
                              std::size_t trials, std::uint64_t seed) {
  if (trials == 0)
    throw std::invalid_argument("empirical_tail: trials must be >= 1");
  if (probabilities.size() != psi.cols())
    throw std::invalid_argument("empirical_tail: dimension mismatch");

  TailExperiment out;
  out.t_grid = t_grid;
  out.trials = trials;
  out.p = p;
  const Eigen::VectorXd col_norms = psi.colwise().squaredNorm().transpose();
  out.frob_sq = col_norms.sum();
  out.beta_used = beta_factor(probabilities, col_norms);
  Eigen::MatrixXd gram = psi * psi.transpose();
  out.lambda_max_psi = lambda_max(0.5 * (gram + gram.transpose()));

  std::vector<std::size_t> hits(t_grid.size(), 0);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(seed, k);
    const auto sampled = sample_with_replacement(probabilities, p, rng);
    const double dev =
        deviation_lambda_max(psi, sketching_matrix(sampled, probabilities));
    for (std::size_t g = 0; g < t_grid.size(); ++g)
      if (dev >= t_grid[g])
        ++hits[g];
  }

  const auto n = static_cast<std::size_t>(psi.rows());
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    out.empirical.push_back(static_cast<double>(hits[g]) /
                            static_cast<double>(trials));
    out.bound.push_back(out.beta_used > 0.0
                            ? bernstein_bound(p, t_grid[g], out.lambda_max_psi,
                                              out.frob_sq, out.beta_used, n)
                            : static_cast<double>(n));
  }
  return out;
}

std::optional<double> inflation_factor(double gamma, double lambda, double t) {
  const double shrink = 1.0 - (gamma / lambda) / (1.0 - t);
  if (!(shrink > 0.0) || !std::isfinite(shrink))
    return std::nullopt;
  return 1.0 / shrink;
}

DeviationCheck deviation_matrix_check(const SpectralData &spectral,
                                      const SketchingMatrix &s, double gamma,
                                      double t, double lambda) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("deviation_matrix_check: t must be in (0, 1)");
  if (!(lambda > 0.0))
    throw std::invalid_argument("deviation_matrix_check: lambda must be positive");
  if (static_cast<std::size_t>(spectral.size()) != s.rows)
    throw std::invalid_argument("deviation_matrix_check: dimension mismatch");

  DeviationCheck check;
  check.gamma = gamma;
  check.t = t;
  check.lambda = lambda;
  check.lambda_max_D = deviation_lambda_max(psi_matrix(spectral, gamma), s);
  check.condition_met = check.lambda_max_D <= t;
  check.gamma_admissible = gamma <= (1.0 - t) * lambda;
  if (check.condition_met && check.gamma_admissible)
    check.inflation = inflation_factor(gamma, lambda, t);
  return check;
}

} // namespace krrlev
