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

#include "krrlev/leverage.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace krrlev {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be positive and finite");
}

Eigen::VectorXd shrinkage(const SpectralData &spectral, double lambda) {
  const double nl = static_cast<double>(spectral.size()) * lambda;
  return spectral.eigenvalues.array() / (spectral.eigenvalues.array() + nl);
}

} // namespace

LeverageScores exact_ridge_leverage(const SpectralData &spectral, double lambda) {
  require_lambda(lambda);
  const Eigen::VectorXd phi = shrinkage(spectral, lambda);
  LeverageScores out;
  out.scores = spectral.eigenvectors.cwiseAbs2() * phi;
  out.lambda = lambda;
  out.method = ScoreMethod::Exact;
  return out;
}

LeverageScores exact_ridge_leverage(const Eigen::MatrixXd &k, double lambda) {
  require_lambda(lambda);
  return exact_ridge_leverage(spectral_decomposition(k), lambda);
}

Eigen::VectorXd ridge_leverage_by_solve(const Eigen::MatrixXd &k, double lambda) {
  require_lambda(lambda);
  require_symmetric(k, "ridge_leverage_by_solve");
  Eigen::MatrixXd reg = k;
  reg.diagonal().array() += static_cast<double>(k.rows()) * lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success)
    throw NumericalError("ridge_leverage_by_solve: K + n lambda I not PD");
  return llt.solve(k).diagonal();
}

LeverageScores approx_ridge_leverage(const NystromSketch &sketch, double lambda) {
  require_lambda(lambda);
  if (sketch.rank == 0)
    throw DegenerateSketchError("approx_ridge_leverage: empty sketch factor");
  const double nl = static_cast<double>(sketch.n()) * lambda;
  Eigen::MatrixXd g = sketch.B.transpose() * sketch.B;
  g.diagonal().array() += nl;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("approx_ridge_leverage: B^T B + n lambda I not PD");
  // ||chol^{-1} B_i||^2 = B_i^T G^{-1} B_i.
  const Eigen::MatrixXd x = llt.matrixL().solve(sketch.B.transpose());
  LeverageScores out;
  out.scores = x.colwise().squaredNorm().transpose();
  out.lambda = lambda;
  out.method = ScoreMethod::Approximate;
  return out;
}

LeverageScores approx_ridge_leverage(const PointSet &points,
                                     const KernelSpec &spec, double lambda,
                                     std::size_t p,
                                     const Eigen::VectorXd &probabilities,
                                     std::uint64_t seed) {
  require_lambda(lambda);
  if (static_cast<std::size_t>(probabilities.size()) != points.size())
    throw std::invalid_argument("approx_ridge_leverage: probability size mismatch");
  const auto sampled = sample_with_replacement(probabilities, p, seed);
  const NystromSketch sketch = build_sketch(points, spec, sampled);
  LeverageScores out = approx_ridge_leverage(sketch, lambda);
  out.sketch_size = p;
  return out;
}

double effective_dimension(const SpectralData &spectral, double lambda) {
  require_lambda(lambda);
  return shrinkage(spectral, lambda).sum();
}

double effective_dimension(const Eigen::MatrixXd &k, double lambda) {
  require_lambda(lambda);
  return effective_dimension(spectral_decomposition(k), lambda);
}

double max_dof(const SpectralData &spectral, double lambda) {
  return static_cast<double>(spectral.size()) *
         exact_ridge_leverage(spectral, lambda).scores.maxCoeff();
}

double max_dof(const Eigen::MatrixXd &k, double lambda) {
  require_lambda(lambda);
  return max_dof(spectral_decomposition(k), lambda);
}

} // namespace krrlev
