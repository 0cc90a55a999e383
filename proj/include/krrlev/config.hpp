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

#ifndef KRRLEV_CONFIG_HPP
#define KRRLEV_CONFIG_HPP

#include "krrlev/datagen.hpp"
#include "krrlev/kernels.hpp"
#include "krrlev/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace krrlev {

enum class ExperimentKind {
  LeverageProfile,
  RiskCurve,
  SummaryTable,
  Concentration,
  ScoreApproximation
};

std::string to_string(ExperimentKind kind);
/// "leverage_profile", "risk_curve", "summary_table", "concentration",
/// "score_approximation".
ExperimentKind parse_experiment_kind(std::string_view name);

enum class DatasetSource { Synthetic, Csv };

struct DatasetConfig {
  DatasetSource source = DatasetSource::Synthetic;
  SyntheticConfig synthetic;
  std::filesystem::path csv_path;
  std::string target = "y";
  bool standardize = true;
  std::string name; ///< optional label for result rows
};

/// Fully resolved run configuration.
///
/// File format: INI-style sections of `key = value` lines, `#` or `;`
/// comments. Lists are comma-separated. Unknown keys are rejected.
///
///   [experiment]     name, seed, trials, output_dir, record_timing
///   [dataset]        source (synthetic|csv), name, n, density, beta_shape,
///                    bernoulli_order, noise_sigma, anchors, seed,
///                    path, target, standardize
///   [kernel]         family (linear|rbf|bernoulli), bandwidth, order
///   [model]          lambda, epsilon, rho, noise_sigma
///   [sampling]       samplers, p_values, p_multiplier, approx_p
///   [concentration]  gamma, t_grid, p
struct ExperimentConfig {
  std::vector<ExperimentKind> experiments;
  DatasetConfig dataset;
  KernelSpec kernel = KernelSpec::bernoulli(2);

  double lambda = 1e-6;
  double epsilon = 0.25;
  double rho = 0.1;
  /// Noise level assumed for risk evaluation on data without ground truth.
  double noise_sigma = 0.0;

  std::vector<SamplerKind> samplers{SamplerKind::Uniform, SamplerKind::Diagonal,
                                    SamplerKind::ExactLeverage,
                                    SamplerKind::ApproxLeverage};
  std::vector<std::size_t> p_values;
  double p_multiplier = 2.0;
  /// Draws used for approximate scores; 0 selects the diagonal-sampling
  /// sufficient size from lambda, epsilon and rho.
  std::size_t approx_p = 0;

  std::optional<double> concentration_gamma; ///< defaults to lambda * epsilon
  std::vector<double> t_grid{0.1, 0.25, 0.5, 0.75};
  std::size_t concentration_p = 0; ///< 0 selects sufficient_p at t = 1/2

  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  bool record_timing = false;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;

  /// `key = value` lines covering every resolved setting, in a fixed order.
  std::vector<std::string> describe() const;
};

/// Parses a config file. Relative dataset paths resolve against the config
/// file's directory. Throws ConfigError (bad content) or IoError (unreadable).
ExperimentConfig load_config(const std::filesystem::path &path);

/// Parses config text; relative paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path &base_dir = {});

} // namespace krrlev

#endif
