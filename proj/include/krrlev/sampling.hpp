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

#ifndef KRRLEV_SAMPLING_HPP
#define KRRLEV_SAMPLING_HPP

#include "krrlev/kernels.hpp"
#include "krrlev/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace krrlev {

enum class SamplerKind { Uniform, Diagonal, ExactLeverage, ApproxLeverage, Custom };

std::string to_string(SamplerKind kind);
/// Accepts "uniform", "diagonal", "exact_leverage", "approx_leverage",
/// "custom". Throws std::invalid_argument otherwise.
SamplerKind parse_sampler_kind(std::string_view name);

struct SamplingPlan {
  Eigen::VectorXd probabilities;
  SamplerKind kind = SamplerKind::Custom;
  std::vector<std::size_t> sampled;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless `probabilities` is nonnegative, finite
/// and sums to 1 within 1e-12.
void validate_distribution(const Eigen::VectorXd &probabilities);

Eigen::VectorXd uniform_distribution(std::size_t n);

/// Normalizes a nonnegative source vector (kernel diagonal for Diagonal,
/// ridge leverage scores for the leverage kinds) to a distribution. Uniform
/// only uses source.size().
Eigen::VectorXd make_distribution(SamplerKind kind,
                                  const Eigen::VectorXd &source);

/// p_i = K_ii / Tr(K), computed from the kernel diagonal only.
Eigen::VectorXd diagonal_distribution(const PointSet &points,
                                      const KernelSpec &spec);

/// p independent draws by inverse CDF over the cumulative array. Each draw
/// takes the top 53 bits of one engine output as u in [0, 1).
std::vector<std::size_t> sample_with_replacement(const Eigen::VectorXd &probabilities,
                                                 std::size_t p, Rng &rng);
std::vector<std::size_t> sample_with_replacement(const Eigen::VectorXd &probabilities,
                                                 std::size_t p, std::uint64_t seed);

SamplingPlan make_plan(SamplerKind kind, Eigen::VectorXd probabilities,
                       std::size_t p, std::uint64_t seed);

/// Largest beta in (0, 1] with p_i >= beta * s_i / sum(s) for all i.
/// Returns 0 when some index with positive score has zero probability.
double beta_factor(const Eigen::VectorXd &probabilities,
                   const Eigen::VectorXd &reference_scores);

/// ceil(8 (d_eff / beta + 1/6) ln(n / rho)); natural logarithm.
std::size_t sufficient_p(double d_eff, double beta, std::size_t n, double rho);

/// Sample size for squared-length (diagonal) sampling:
/// ceil(8 (Tr(K) / (n lambda epsilon) + 1/6) ln(n / rho)).
std::size_t sufficient_p_diagonal(double trace, std::size_t n, double lambda,
                                  double epsilon, double rho);

} // namespace krrlev

#endif
