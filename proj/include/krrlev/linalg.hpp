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

#ifndef KRRLEV_LINALG_HPP
#define KRRLEV_LINALG_HPP

#include <Eigen/Dense>

#include <string_view>

namespace krrlev {

/// Eigendecomposition K = U diag(eigenvalues) U^T with eigenvalues sorted in
/// decreasing order. Round-off negatives are clamped to zero.
struct SpectralData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Throws std::invalid_argument unless `m` is square, finite and symmetric to
/// within 1e-12 relative (max-norm).
void require_symmetric(const Eigen::MatrixXd &m, std::string_view who);

SpectralData spectral_decomposition(const Eigen::MatrixXd &k);

/// Extremal eigenvalues of a symmetric matrix; signed.
double lambda_max(const Eigen::MatrixXd &m);
double lambda_min(const Eigen::MatrixXd &m);

} // namespace krrlev

#endif
