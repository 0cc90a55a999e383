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

#ifndef KRRLEV_EXPERIMENTS_HPP
#define KRRLEV_EXPERIMENTS_HPP

#include "krrlev/bounds.hpp"
#include "krrlev/config.hpp"
#include "krrlev/datagen.hpp"
#include "krrlev/linalg.hpp"
#include "krrlev/regression.hpp"
#include "krrlev/sampling.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace krrlev {

RegressionDataset load_dataset(const ExperimentConfig &config);

/// Dense quantities shared by every experiment on one dataset.
struct Problem {
  explicit Problem(RegressionDataset ds) : dataset(std::move(ds)) {}

  RegressionDataset dataset;
  KernelSpec spec;
  Eigen::MatrixXd k;
  SpectralData spectral;
  GroundTruth truth;
  double lambda = 0.0;
  double gamma = 0.0; ///< lambda * epsilon, the sampling level
  Eigen::VectorXd scores;       ///< l_i(lambda)
  Eigen::VectorXd gamma_scores; ///< l_i(gamma)
  double d_eff = 0.0;
  double d_mof = 0.0;
  RiskReport full_risk;
};

/// Without ground truth (CSV data) the targets y stand in for f* and the
/// noise level comes from model.noise_sigma.
Problem prepare_problem(const ExperimentConfig &config,
                        RegressionDataset dataset);

std::uint64_t task_seed(std::uint64_t base, SamplerKind sampler, std::size_t p,
                        std::size_t trial);

/// One Nystrom trial: sample, sketch, score.
struct SketchTrial {
  SamplerKind sampler = SamplerKind::Uniform;
  std::size_t p = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  RiskReport risk;
  double risk_ratio = 0.0;
  double beta = 0.0;
  std::size_t distinct = 0;
  std::optional<double> wall_time_ms;
};

/// p >= n selects every column once (full sampling) instead of drawing.
SketchTrial run_sketch_trial(const Problem &problem,
                             const ExperimentConfig &config, SamplerKind sampler,
                             std::size_t p, std::size_t trial);

struct LeverageProfile {
  Eigen::VectorXd x; ///< first coordinate of each point
  Eigen::VectorXd exact;
  std::optional<Eigen::VectorXd> approx;
  std::size_t approx_p = 0;
  double d_eff = 0.0;
  double center_mean = 0.0; ///< points in the middle two deciles of x
  double border_mean = 0.0; ///< points in the outer two deciles of x
};

LeverageProfile run_leverage_profile(const Problem &problem,
                                     const ExperimentConfig &config);

struct RiskCurvePoint {
  SamplerKind sampler = SamplerKind::Uniform;
  std::size_t p = 0;
  double median_ratio = 0.0;
};

struct RiskCurve {
  std::vector<SketchTrial> trials;
  std::vector<RiskCurvePoint> medians;
  double full_risk = 0.0;

  std::optional<double> median(SamplerKind sampler, std::size_t p) const;
};

RiskCurve run_risk_curve(const Problem &problem, const ExperimentConfig &config);

struct SummaryRow {
  std::string dataset;
  std::string kernel;
  SamplerKind sampler = SamplerKind::Uniform;
  std::size_t p = 0;
  std::uint64_t seed = 0; ///< trial seed; the base seed on median rows
  bool median = false;
  double d_eff = 0.0;
  double d_mof = 0.0;
  double bias_sq = 0.0;
  double variance = 0.0;
  double risk = 0.0;
  double risk_ratio = 0.0;
  double beta = 0.0;
  std::optional<double> wall_time_ms;
};

struct ResultTable {
  std::vector<SummaryRow> rows;
  std::vector<SummaryRow> medians;

  const SummaryRow *median(SamplerKind sampler) const;
};

ResultTable run_summary_table(const Problem &problem,
                              const ExperimentConfig &config);

struct ConcentrationResult {
  double gamma = 0.0;
  std::vector<SamplerKind> samplers;
  std::vector<TailExperiment> tails; ///< parallel to samplers
};

/// Custom and ApproxLeverage samplers are skipped; ExactLeverage uses the
/// scores at level gamma.
ConcentrationResult run_concentration(const Problem &problem,
                                      const ExperimentConfig &config);

struct ScoreApproxTrial {
  std::uint64_t seed = 0;
  double max_error = 0.0;     ///< max_i (l_i - approx_i)
  bool upper_violated = false; ///< some approx_i > l_i + 1e-8
  bool additive_ok = false;    ///< all approx_i >= l_i - 2 epsilon
};

struct ScoreApproximation {
  std::size_t p = 0;
  std::vector<ScoreApproxTrial> trials;
  double success_fraction = 0.0;
  double target = 0.0; ///< 1 - rho
  std::size_t upper_violations = 0;
};

/// Diagonal sampling at the given p, or at the sufficient size when
/// sampling.approx_p is 0.
ScoreApproximation run_score_approximation(const Problem &problem,
                                           const ExperimentConfig &config);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_leverage_profile(const LeverageProfile &r, const ExperimentConfig &config,
                            const std::filesystem::path &path);
void write_risk_curve(const RiskCurve &r, const ExperimentConfig &config,
                      const std::filesystem::path &path);
void write_summary_table(const ResultTable &r, const ExperimentConfig &config,
                         const std::filesystem::path &path);
void write_concentration(const ConcentrationResult &r,
                         const ExperimentConfig &config,
                         const std::filesystem::path &path);
void write_score_approximation(const ScoreApproximation &r,
                               const ExperimentConfig &config,
                               const std::filesystem::path &path);

/// Runs one experiment and writes output_dir/<name>.csv. Returns the path.
std::filesystem::path run_experiment(const Problem &problem,
                                     const ExperimentConfig &config,
                                     ExperimentKind kind);

} // namespace krrlev

#endif
