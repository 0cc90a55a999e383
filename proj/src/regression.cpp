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

#include "krrlev/regression.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace krrlev {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be positive and finite");
}

Eigen::LLT<Eigen::MatrixXd> regularized_cholesky(const Eigen::MatrixXd &m,
                                                 double lambda) {
  require_symmetric(m, "regression");
  Eigen::MatrixXd reg = m;
  reg.diagonal().array() += static_cast<double>(m.rows()) * lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success)
    throw NumericalError("M + n lambda I is not positive definite");
  return llt;
}

void require_conforming(const Eigen::MatrixXd &m, const Eigen::VectorXd &v) {
  if (m.rows() != v.size())
    throw std::invalid_argument("dimension mismatch between matrix and vector");
  if (!v.allFinite())
    throw std::invalid_argument("non-finite vector entry");
}

} // namespace

void GroundTruth::validate() const {
  if (!f_star.allFinite())
    throw std::invalid_argument("GroundTruth: non-finite f*");
  if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
    throw std::invalid_argument("GroundTruth: sigma^2 must be >= 0");
}

KrrModel krr_fit(const Eigen::MatrixXd &k, const Eigen::VectorXd &y,
                 double lambda) {
  require_lambda(lambda);
  require_conforming(k, y);
  const auto llt = regularized_cholesky(k, lambda);
  KrrModel model;
  model.alpha = llt.solve(y);
  model.fitted = k * model.alpha;
  model.lambda = lambda;
  model.kernel_source = KernelSource::Full;
  return model;
}

KrrModel krr_fit_nystrom(const NystromSketch &sketch, const Eigen::VectorXd &y,
                         double lambda) {
  require_lambda(lambda);
  if (sketch.rank == 0 || sketch.B.cols() == 0)
    throw DegenerateSketchError("krr_fit_nystrom: sketch has rank 0");
  if (static_cast<std::size_t>(y.size()) != sketch.n() || !y.allFinite())
    throw std::invalid_argument("krr_fit_nystrom: bad response vector");
  const double nl = static_cast<double>(sketch.n()) * lambda;
  Eigen::MatrixXd g = sketch.B.transpose() * sketch.B;
  g.diagonal().array() += nl;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("krr_fit_nystrom: B^T B + n lambda I not PD");

  KrrModel model;
  model.fitted = sketch.B * llt.solve(sketch.B.transpose() * y);
  // (L + n lambda I)^{-1} y = (y - L (L + n lambda I)^{-1} y) / (n lambda).
  model.alpha = (y - model.fitted) / nl;
  model.lambda = lambda;
  model.kernel_source = KernelSource::Nystrom;
  return model;
}

double bias_squared(const Eigen::MatrixXd &m, const GroundTruth &truth,
                    double lambda) {
  require_lambda(lambda);
  truth.validate();
  require_conforming(m, truth.f_star);
  const auto llt = regularized_cholesky(m, lambda);
  const double n = static_cast<double>(m.rows());
  return n * lambda * lambda * llt.solve(truth.f_star).squaredNorm();
}

double variance_term(const Eigen::MatrixXd &m, double sigma_sq, double lambda) {
  require_lambda(lambda);
  if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq))
    throw std::invalid_argument("variance_term: sigma^2 must be >= 0");
  require_symmetric(m, "variance_term");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double n = static_cast<double>(m.rows());
  const Eigen::ArrayXd s = es.eigenvalues().array().max(0.0);
  return sigma_sq / n * (s / (s + n * lambda)).square().sum();
}

RiskReport analytic_risk(const Eigen::MatrixXd &m, const GroundTruth &truth,
                         double lambda) {
  RiskReport r;
  r.bias_sq = bias_squared(m, truth, lambda);
  r.variance = variance_term(m, truth.sigma_sq, lambda);
  r.total = r.bias_sq + r.variance;
  r.noise_sigma_sq = truth.sigma_sq;
  r.lambda = lambda;
  return r;
}

RiskReport analytic_risk(const SpectralData &spectral, const GroundTruth &truth,
                         double lambda) {
  require_lambda(lambda);
  truth.validate();
  if (truth.f_star.size() != spectral.size())
    throw std::invalid_argument("analytic_risk: dimension mismatch");
  const double n = static_cast<double>(spectral.size());
  const Eigen::ArrayXd s = spectral.eigenvalues.array();
  const Eigen::ArrayXd coeff =
      (spectral.eigenvectors.transpose() * truth.f_star).array();
  RiskReport r;
  r.bias_sq = n * lambda * lambda * (coeff / (s + n * lambda)).square().sum();
  r.variance = truth.sigma_sq / n * (s / (s + n * lambda)).square().sum();
  r.total = r.bias_sq + r.variance;
  r.noise_sigma_sq = truth.sigma_sq;
  r.lambda = lambda;
  return r;
}

RiskReport analytic_risk(const NystromSketch &sketch, const GroundTruth &truth,
                         double lambda) {
  require_lambda(lambda);
  truth.validate();
  if (sketch.rank == 0)
    throw DegenerateSketchError("analytic_risk: sketch has rank 0");
  if (static_cast<std::size_t>(truth.f_star.size()) != sketch.n())
    throw std::invalid_argument("analytic_risk: dimension mismatch");
  const double n = static_cast<double>(sketch.n());
  const double nl = n * lambda;

  const Eigen::MatrixXd btb = sketch.B.transpose() * sketch.B;
  // Nonzero eigenvalues of B B^T are those of B^T B.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(btb, Eigen::EigenvaluesOnly);
  const Eigen::ArrayXd s = es.eigenvalues().array().max(0.0);

  Eigen::MatrixXd g = btb;
  g.diagonal().array() += nl;
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("analytic_risk: B^T B + n lambda I not PD");
  // n lambda (L + n lambda I)^{-1} f = f - B G^{-1} B^T f.
  const Eigen::VectorXd resid =
      truth.f_star - sketch.B * llt.solve(sketch.B.transpose() * truth.f_star);

  RiskReport r;
  r.bias_sq = resid.squaredNorm() / n;
  r.variance = truth.sigma_sq / n * (s / (s + nl)).square().sum();
  r.total = r.bias_sq + r.variance;
  r.noise_sigma_sq = truth.sigma_sq;
  r.lambda = lambda;
  return r;
}

MonteCarloEstimate monte_carlo_risk(const Eigen::MatrixXd &m,
                                    const GroundTruth &truth, double lambda,
                                    std::size_t trials, std::uint64_t seed) {
  require_lambda(lambda);
  truth.validate();
  require_conforming(m, truth.f_star);
  if (trials == 0)
    throw std::invalid_argument("monte_carlo_risk: trials must be >= 1");
  const auto llt = regularized_cholesky(m, lambda);
  // Smoother H = M (M + n lambda I)^{-1}; symmetric since the factors commute.
  Eigen::MatrixXd h = llt.solve(m);
  h = 0.5 * (h + h.transpose()).eval();

  const auto n = m.rows();
  const double sigma = std::sqrt(truth.sigma_sq);
  const Eigen::VectorXd bias_part = h * truth.f_star - truth.f_star;

  double sum = 0.0;
  double sum_sq = 0.0;
  Eigen::VectorXd xi(n);
  for (std::size_t t = 0; t < trials; ++t) {
    double loss = 0.0;
    if (sigma > 0.0) {
      Rng rng = make_rng(seed, t);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i)
        xi(i) = normal(rng);
      loss = (bias_part + sigma * (h * xi)).squaredNorm() / static_cast<double>(n);
    } else {
      loss = bias_part.squaredNorm() / static_cast<double>(n);
    }
    sum += loss;
    sum_sq += loss * loss;
  }
  const double tr = static_cast<double>(trials);
  MonteCarloEstimate est;
  est.mean = sum / tr;
  est.trials = trials;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - tr * est.mean * est.mean) / (tr - 1.0));
    est.standard_error = std::sqrt(var / tr);
  }
  return est;
}

} // namespace krrlev
