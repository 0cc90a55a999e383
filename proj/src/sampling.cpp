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

#include "krrlev/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace krrlev {

std::string to_string(SamplerKind kind) {
  switch (kind) {
  case SamplerKind::Uniform:
    return "uniform";
  case SamplerKind::Diagonal:
    return "diagonal";
  case SamplerKind::ExactLeverage:
    return "exact_leverage";
  case SamplerKind::ApproxLeverage:
    return "approx_leverage";
  case SamplerKind::Custom:
    return "custom";
  }
  return "unknown";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  for (auto kind : {SamplerKind::Uniform, SamplerKind::Diagonal,
                    SamplerKind::ExactLeverage, SamplerKind::ApproxLeverage,
                    SamplerKind::Custom})
    if (name == to_string(kind))
      return kind;
  throw std::invalid_argument("unknown sampler '" + std::string(name) + "'");
}

void validate_distribution(const Eigen::VectorXd &probabilities) {
  if (probabilities.size() == 0)
    throw std::invalid_argument("distribution is empty");
  if (!probabilities.allFinite() || probabilities.minCoeff() < 0.0)
    throw std::invalid_argument("distribution has negative or non-finite entry");
  if (std::abs(probabilities.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("distribution does not sum to 1");
}

Eigen::VectorXd uniform_distribution(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("uniform_distribution: n must be positive");
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                   1.0 / static_cast<double>(n));
}

Eigen::VectorXd make_distribution(SamplerKind kind,
                                  const Eigen::VectorXd &source) {
  if (kind == SamplerKind::Uniform)
    return uniform_distribution(static_cast<std::size_t>(source.size()));
  if (source.size() == 0 || !source.allFinite())
    throw std::invalid_argument("make_distribution: empty or non-finite source");
  if (source.minCoeff() < 0.0)
    throw std::invalid_argument("make_distribution: negative source entry");
  const double total = source.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("make_distribution: all-zero source vector");
  return source / total;
}

Eigen::VectorXd diagonal_distribution(const PointSet &points,
                                      const KernelSpec &spec) {
  return make_distribution(SamplerKind::Diagonal,
                           kernel_diagonal(points, spec));
}

std::vector<std::size_t> sample_with_replacement(const Eigen::VectorXd &probabilities,
                                                 std::size_t p, Rng &rng) {
  validate_distribution(probabilities);
  if (p == 0)
    throw std::invalid_argument("sample_with_replacement: p must be >= 1");

  const auto n = static_cast<std::size_t>(probabilities.size());
  std::vector<double> cdf(n);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += probabilities(static_cast<Eigen::Index>(i));
    cdf[i] = acc;
    if (probabilities(static_cast<Eigen::Index>(i)) > 0.0)
      last_positive = i;
  }

  std::vector<std::size_t> out(p);
  for (auto &idx : out) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * acc);
    idx = std::min(static_cast<std::size_t>(it - cdf.begin()), last_positive);
  }
  return out;
}

std::vector<std::size_t> sample_with_replacement(const Eigen::VectorXd &probabilities,
                                                 std::size_t p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_with_replacement(probabilities, p, rng);
}

SamplingPlan make_plan(SamplerKind kind, Eigen::VectorXd probabilities,
                       std::size_t p, std::uint64_t seed) {
  SamplingPlan plan;
  plan.sampled = sample_with_replacement(probabilities, p, seed);
  plan.probabilities = std::move(probabilities);
  plan.kind = kind;
  plan.seed = seed;
  return plan;
}

double beta_factor(const Eigen::VectorXd &probabilities,
                   const Eigen::VectorXd &reference_scores) {
  validate_distribution(probabilities);
  if (reference_scores.size() != probabilities.size())
    throw std::invalid_argument("beta_factor: size mismatch");
  if (!reference_scores.allFinite() || reference_scores.minCoeff() < 0.0)
    throw std::invalid_argument("beta_factor: scores must be nonnegative");
  const double total = reference_scores.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("beta_factor: scores must have positive sum");

  double beta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double s = reference_scores(i);
    if (s <= 0.0)
      continue;
    beta = std::min(beta, probabilities(i) * total / s);
  }
  return std::min(beta, 1.0);
}

std::size_t sufficient_p(double d_eff, double beta, std::size_t n, double rho) {
  if (!(d_eff > 0.0) || !std::isfinite(d_eff))
    throw std::invalid_argument("sufficient_p: d_eff must be positive");
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("sufficient_p: beta must be in (0, 1]");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("sufficient_p: rho must be in (0, 1)");
  if (n == 0)
    throw std::invalid_argument("sufficient_p: n must be positive");
  const double rhs = 8.0 * (d_eff / beta + 1.0 / 6.0) *
                     std::log(static_cast<double>(n) / rho);
  return static_cast<std::size_t>(std::ceil(rhs));
}

std::size_t sufficient_p_diagonal(double trace, std::size_t n, double lambda,
                                  double epsilon, double rho) {
  if (!(trace > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("sufficient_p_diagonal: trace and lambda must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("sufficient_p_diagonal: epsilon must be in (0, 1/2)");
  // d_eff / beta = Tr(K) / (n lambda epsilon) for squared-length sampling.
  return sufficient_p(trace / (static_cast<double>(n) * lambda * epsilon), 1.0,
                      n, rho);
}

} // namespace krrlev
