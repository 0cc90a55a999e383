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

// Shared helpers for the unit and acceptance tests. Oracles here use
// factorizations the library does not (LU inverses, SVD pseudo-inverses) so
// that agreement is an independent check.

#ifndef KRRLEV_TESTS_SUPPORT_HPP
#define KRRLEV_TESTS_SUPPORT_HPP

#include "krrlev/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace krrlev::test {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      g(i, j) = normal(rng);
  return g;
}

/// G G^T / rank, exactly symmetric.
inline Eigen::MatrixXd random_spsd(Eigen::Index n, Eigen::Index rank,
                                   std::uint64_t seed) {
  const Eigen::MatrixXd g = gaussian_matrix(n, rank, seed);
  Eigen::MatrixXd k = g * g.transpose() / static_cast<double>(rank);
  return 0.5 * (k + k.transpose());
}

inline Eigen::MatrixXd random_pd(Eigen::Index n, std::uint64_t seed,
                                 double shift = 0.1) {
  Eigen::MatrixXd k = random_spsd(n, n, seed);
  k.diagonal().array() += shift;
  return k;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  return gaussian_matrix(n, 1, seed).col(0);
}

inline Eigen::MatrixXd lu_inverse(const Eigen::MatrixXd &a) {
  return a.fullPivLu().inverse();
}

inline Eigen::MatrixXd ridge_resolvent(const Eigen::MatrixXd &m, double lambda) {
  const auto n = m.rows();
  return lu_inverse(m + static_cast<double>(n) * lambda *
                            Eigen::MatrixXd::Identity(n, n));
}

/// diag(M (M + n lambda I)^{-1}).
inline Eigen::VectorXd oracle_scores(const Eigen::MatrixXd &m, double lambda) {
  return (m * ridge_resolvent(m, lambda)).diagonal();
}

inline Eigen::MatrixXd svd_pinv(const Eigen::MatrixXd &a, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const double cut = s.size() ? rel_tol * s(0) : 0.0;
  Eigen::VectorXd inv = s;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// C W^+ C^T over the distinct sampled indices.
inline Eigen::MatrixXd oracle_nystrom(const Eigen::MatrixXd &k,
                                      const std::vector<std::size_t> &sampled,
                                      double rel_tol = 1e-12) {
  const std::set<std::size_t> distinct(sampled.begin(), sampled.end());
  const std::vector<std::size_t> idx(distinct.begin(), distinct.end());
  const auto p = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd c(k.rows(), p), w(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    c.col(j) = k.col(static_cast<Eigen::Index>(idx[j]));
    for (Eigen::Index i = 0; i < p; ++i)
      w(i, j) = k(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
  }
  return c * svd_pinv(w, rel_tol) * c.transpose();
}

inline double min_eig(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_eig(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// One-sided normal-approximation slack for a binomial proportion.
inline double binomial_slack(double prob, std::size_t trials, double z) {
  const double q = std::clamp(prob, 0.0, 1.0);
  return z * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

inline double bias_sq_oracle(const Eigen::MatrixXd &m, const Eigen::VectorXd &f,
                             double lambda) {
  const auto n = static_cast<double>(m.rows());
  return n * lambda * lambda * (ridge_resolvent(m, lambda) * f).squaredNorm();
}

} // namespace krrlev::test

#endif
