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

#include "krrlev/linalg.hpp"

#include <stdexcept>
#include <string>

namespace krrlev {

void require_symmetric(const Eigen::MatrixXd &m, std::string_view who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  if (!m.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite entry");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

SpectralData spectral_decomposition(const Eigen::MatrixXd &k) {
  require_symmetric(k, "spectral_decomposition");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_decomposition: eigensolver failed");
  SpectralData out;
  out.eigenvalues = es.eigenvalues().reverse().cwiseMax(0.0);
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

double lambda_max(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

double lambda_min(const Eigen::MatrixXd &m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

} // namespace krrlev
