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

#include "krrlev/experiments.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/leverage.hpp"
#include "krrlev/rng.hpp"
#include "krrlev/sketch.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

namespace krrlev {

namespace {

constexpr std::uint64_t kSampleStream = 0;
constexpr std::uint64_t kApproxStream = 1;

double median_of(std::vector<double> v) {
  if (v.empty())
    return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string kernel_label(const KernelSpec &spec) {
  switch (spec.family) {
  case KernelFamily::Linear:
    return "linear";
  case KernelFamily::Rbf:
    return "rbf(h=" + format_double(spec.bandwidth) + ")";
  case KernelFamily::Bernoulli:
    return "bernoulli(order=" + std::to_string(spec.order) + ")";
  }
  return "unknown";
}

std::vector<std::size_t> all_columns(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

Eigen::VectorXd approx_distribution(const Problem &pb, std::size_t q,
                                    std::uint64_t seed) {
  const Eigen::VectorXd diag = make_distribution(SamplerKind::Diagonal, pb.k.diagonal());
  const auto sampled = sample_with_replacement(diag, q, seed);
  const NystromSketch sketch = build_sketch(pb.k, sampled);
  return make_distribution(SamplerKind::ApproxLeverage,
                           approx_ridge_leverage(sketch, pb.gamma).scores);
}

Eigen::VectorXd sampler_distribution(const Problem &pb, SamplerKind sampler,
                                     std::size_t approx_q, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(pb.k.rows());
  switch (sampler) {
  case SamplerKind::Uniform:
    return uniform_distribution(n);
  case SamplerKind::Diagonal:
    return make_distribution(SamplerKind::Diagonal, pb.k.diagonal());
  case SamplerKind::ExactLeverage:
    return make_distribution(SamplerKind::ExactLeverage, pb.gamma_scores);
  case SamplerKind::ApproxLeverage:
    return approx_distribution(pb, approx_q, derive_seed(seed, kApproxStream));
  case SamplerKind::Custom:
    break;
  }
  throw std::invalid_argument("sampler '" + to_string(sampler) +
                              "' cannot be used in experiments");
}

class CsvFile {
public:
  CsvFile(const std::filesystem::path &path, const ExperimentConfig &config,
          ExperimentKind kind)
      : path_(path) {
    std::error_code ec;
    if (path.has_parent_path())
      std::filesystem::create_directories(path.parent_path(), ec);
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_)
      throw IoError("cannot write '" + path.string() + "'");
    comment("experiment = " + to_string(kind));
    for (const auto &line : config.describe())
      comment(line);
  }

  void comment(const std::string &line) { out_ << "# " << line << '\n'; }

  void row(const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_)
      throw IoError("failed writing '" + path_.string() + "'");
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string fmt_opt(const std::optional<double> &v) {
  return v ? format_double(*v) : std::string();
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

RegressionDataset load_dataset(const ExperimentConfig &config) {
  RegressionDataset ds =
      config.dataset.source == DatasetSource::Synthetic
          ? synthesize(config.dataset.synthetic)
          : load_csv(config.dataset.csv_path, config.dataset.target,
                     config.dataset.standardize);
  if (!config.dataset.name.empty())
    ds.name = config.dataset.name;
  return ds;
}

Problem prepare_problem(const ExperimentConfig &config, RegressionDataset dataset) {
  Problem pb{std::move(dataset)};
  pb.spec = config.kernel;
  pb.k = kernel_matrix(pb.dataset.points, pb.spec).entries;
  pb.spectral = spectral_decomposition(pb.k);
  pb.truth = pb.dataset.truth ? *pb.dataset.truth
                              : GroundTruth{pb.dataset.y,
                                         config.noise_sigma * config.noise_sigma};
  pb.truth.validate();
  pb.lambda = config.lambda;
  pb.gamma = config.lambda * config.epsilon;
  pb.scores = exact_ridge_leverage(pb.spectral, pb.lambda).scores;
  pb.gamma_scores = exact_ridge_leverage(pb.spectral, pb.gamma).scores;
  pb.d_eff = pb.scores.sum();
  pb.d_mof = static_cast<double>(pb.scores.size()) * pb.scores.maxCoeff();
  pb.full_risk = analytic_risk(pb.spectral, pb.truth, pb.lambda);
  if (!(pb.full_risk.total > 0.0))
    throw NumericalError("full-kernel risk is zero; risk ratios are undefined");
  return pb;
}

std::uint64_t task_seed(std::uint64_t base, SamplerKind sampler, std::size_t p,
                        std::size_t trial) {
  std::uint64_t s = derive_seed(base, static_cast<std::uint64_t>(sampler));
  s = derive_seed(s, p);
  return derive_seed(s, trial);
}

SketchTrial run_sketch_trial(const Problem &pb, const ExperimentConfig &config,
                             SamplerKind sampler, std::size_t p,
                             std::size_t trial) {
  if (p == 0)
    throw std::invalid_argument("run_sketch_trial: p must be >= 1");
  const auto n = static_cast<std::size_t>(pb.k.rows());
  SketchTrial out;
  out.sampler = sampler;
  out.p = p;
  out.trial = trial;
  out.seed = task_seed(config.seed, sampler, p, trial);

  const auto start = std::chrono::steady_clock::now();
  const std::size_t approx_q = config.approx_p > 0 ? config.approx_p : p;
  const Eigen::VectorXd probs = sampler_distribution(pb, sampler, approx_q, out.seed);
  const auto sampled =
      p >= n ? all_columns(n)
             : sample_with_replacement(probs, p, derive_seed(out.seed, kSampleStream));
  const NystromSketch sketch = build_sketch(pb.k, sampled);
  const auto stop = std::chrono::steady_clock::now();

  out.distinct = sketch.indices.size();
  out.risk = analytic_risk(sketch, pb.truth, pb.lambda);
  out.risk_ratio = out.risk.total / pb.full_risk.total;
  out.beta = beta_factor(probs, pb.gamma_scores);
  if (config.record_timing)
    out.wall_time_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  return out;
}

LeverageProfile run_leverage_profile(const Problem &pb,
                                     const ExperimentConfig &config) {
  const auto &points = pb.dataset.points;
  const std::size_t n = points.size();
  LeverageProfile r;
  r.x = points.matrix().col(0);
  r.exact = pb.scores;
  r.d_eff = pb.d_eff;
  if (config.approx_p > 0) {
    r.approx_p = config.approx_p;
    r.approx = approx_ridge_leverage(
                   points, pb.spec, pb.lambda, config.approx_p,
                   make_distribution(SamplerKind::Diagonal, pb.k.diagonal()),
                   task_seed(config.seed, SamplerKind::Diagonal, config.approx_p, 0))
                   .scores;
  }

  std::vector<std::size_t> order = all_columns(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.x(a) < r.x(b); });
  const std::size_t q = std::max<std::size_t>(n / 10, 1);
  auto mean_over = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += r.exact(static_cast<Eigen::Index>(order[i]));
    return std::pair{s, hi - lo};
  };
  const std::size_t mid = n / 2;
  const auto [cs, cn] = mean_over(mid >= q ? mid - q : 0, std::min(n, mid + q));
  const auto [bl, bln] = mean_over(0, q);
  const auto [br, brn] = mean_over(n - q, n);
  r.center_mean = cs / static_cast<double>(cn);
  r.border_mean = (bl + br) / static_cast<double>(bln + brn);
  return r;
}

std::optional<double> RiskCurve::median(SamplerKind sampler, std::size_t p) const {
  for (const auto &m : medians)
    if (m.sampler == sampler && m.p == p)
      return m.median_ratio;
  return std::nullopt;
}

RiskCurve run_risk_curve(const Problem &pb, const ExperimentConfig &config) {
  if (config.p_values.empty())
    throw std::invalid_argument("run_risk_curve: p_values is empty");
  RiskCurve r;
  r.full_risk = pb.full_risk.total;
  for (SamplerKind sampler : config.samplers) {
    for (std::size_t p : config.p_values) {
      std::vector<double> ratios;
      for (std::size_t t = 0; t < config.trials; ++t) {
        r.trials.push_back(run_sketch_trial(pb, config, sampler, p, t));
        ratios.push_back(r.trials.back().risk_ratio);
      }
      r.medians.push_back({sampler, p, median_of(std::move(ratios))});
    }
  }
  return r;
}

const SummaryRow *ResultTable::median(SamplerKind sampler) const {
  for (const auto &m : medians)
    if (m.sampler == sampler)
      return &m;
  return nullptr;
}

ResultTable run_summary_table(const Problem &pb, const ExperimentConfig &config) {
  const auto p = static_cast<std::size_t>(
      std::max(1.0, std::ceil(config.p_multiplier * pb.d_eff)));
  ResultTable table;
  SummaryRow base;
  base.dataset = pb.dataset.name;
  base.kernel = kernel_label(pb.spec);
  base.p = p;
  base.d_eff = pb.d_eff;
  base.d_mof = pb.d_mof;

  for (SamplerKind sampler : config.samplers) {
    std::vector<double> bias, var, risk, ratio, beta, wall;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const SketchTrial st = run_sketch_trial(pb, config, sampler, p, t);
      SummaryRow row = base;
      row.sampler = sampler;
      row.seed = st.seed;
      row.bias_sq = st.risk.bias_sq;
      row.variance = st.risk.variance;
      row.risk = st.risk.total;
      row.risk_ratio = st.risk_ratio;
      row.beta = st.beta;
      row.wall_time_ms = st.wall_time_ms;
      table.rows.push_back(row);
      bias.push_back(row.bias_sq);
      var.push_back(row.variance);
      risk.push_back(row.risk);
      ratio.push_back(row.risk_ratio);
      beta.push_back(row.beta);
      if (row.wall_time_ms)
        wall.push_back(*row.wall_time_ms);
    }
    SummaryRow m = base;
    m.sampler = sampler;
    m.seed = config.seed;
    m.median = true;
    m.bias_sq = median_of(bias);
    m.variance = median_of(var);
    m.risk = median_of(risk);
    m.risk_ratio = median_of(ratio);
    m.beta = median_of(beta);
    if (!wall.empty())
      m.wall_time_ms = median_of(wall);
    table.medians.push_back(m);
  }
  return table;
}

ConcentrationResult run_concentration(const Problem &pb,
                                      const ExperimentConfig &config) {
  ConcentrationResult r;
  r.gamma = config.concentration_gamma.value_or(pb.gamma);
  const Eigen::MatrixXd psi = psi_matrix(pb.spectral, r.gamma);
  const Eigen::VectorXd scores =
      r.gamma == pb.gamma ? pb.gamma_scores
                          : exact_ridge_leverage(pb.spectral, r.gamma).scores;
  const auto n = static_cast<std::size_t>(pb.k.rows());
  const std::size_t p = config.concentration_p > 0
                            ? config.concentration_p
                            : sufficient_p(scores.sum(), 1.0, n, config.rho);

  for (SamplerKind sampler : config.samplers) {
    Eigen::VectorXd probs;
    if (sampler == SamplerKind::Uniform)
      probs = uniform_distribution(n);
    else if (sampler == SamplerKind::Diagonal)
      probs = make_distribution(SamplerKind::Diagonal, pb.k.diagonal());
    else if (sampler == SamplerKind::ExactLeverage)
      probs = make_distribution(SamplerKind::ExactLeverage, scores);
    else
      continue;
    r.samplers.push_back(sampler);
    r.tails.push_back(empirical_tail(psi, probs, p, config.t_grid, config.trials,
                                     task_seed(config.seed, sampler, p, 0)));
  }
  return r;
}

ScoreApproximation run_score_approximation(const Problem &pb,
                                           const ExperimentConfig &config) {
  const auto n = static_cast<std::size_t>(pb.k.rows());
  ScoreApproximation r;
  r.p = config.approx_p > 0
            ? config.approx_p
            : sufficient_p_diagonal(pb.k.trace(), n, pb.lambda, config.epsilon,
                                    config.rho);
  r.target = 1.0 - config.rho;
  const Eigen::VectorXd probs =
      make_distribution(SamplerKind::Diagonal, pb.k.diagonal());

  std::size_t successes = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    ScoreApproxTrial trial;
    trial.seed = task_seed(config.seed, SamplerKind::Diagonal, r.p, t);
    const Eigen::VectorXd approx =
        approx_ridge_leverage(pb.dataset.points, pb.spec, pb.lambda, r.p, probs,
                              trial.seed)
            .scores;
    const Eigen::VectorXd diff = pb.scores - approx;
    trial.max_error = diff.maxCoeff();
    trial.upper_violated = diff.minCoeff() < -1e-8;
    trial.additive_ok = diff.maxCoeff() <= 2.0 * config.epsilon;
    successes += trial.additive_ok ? 1 : 0;
    r.upper_violations += trial.upper_violated ? 1 : 0;
    r.trials.push_back(trial);
  }
  r.success_fraction = config.trials == 0
                           ? 0.0
                           : static_cast<double>(successes) /
                                 static_cast<double>(config.trials);
  return r;
}

void write_leverage_profile(const LeverageProfile &r, const ExperimentConfig &config,
                            const std::filesystem::path &path) {
  CsvFile f(path, config, ExperimentKind::LeverageProfile);
  f.comment("d_eff = " + format_double(r.d_eff));
  f.comment("center_decile_mean = " + format_double(r.center_mean));
  f.comment("border_decile_mean = " + format_double(r.border_mean));
  std::vector<std::string> head{"index", "x", "leverage"};
  if (r.approx)
    head.push_back("approx_leverage");
  f.row(head);
  for (Eigen::Index i = 0; i < r.exact.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), format_double(r.x(i)),
                                 format_double(r.exact(i))};
    if (r.approx)
      row.push_back(format_double((*r.approx)(i)));
    f.row(row);
  }
  f.close();
}

void write_risk_curve(const RiskCurve &r, const ExperimentConfig &config,
                      const std::filesystem::path &path) {
  CsvFile f(path, config, ExperimentKind::RiskCurve);
  f.comment("full_kernel_risk = " + format_double(r.full_risk));
  std::vector<std::string> head{"sampler", "p",        "trial",    "seed",
                                "distinct", "bias_sq", "variance", "risk",
                                "risk_ratio", "beta"};
  if (config.record_timing)
    head.push_back("wall_time_ms");
  f.row(head);
  for (const auto &t : r.trials) {
    std::vector<std::string> row{to_string(t.sampler),
                                 std::to_string(t.p),
                                 std::to_string(t.trial),
                                 std::to_string(t.seed),
                                 std::to_string(t.distinct),
                                 format_double(t.risk.bias_sq),
                                 format_double(t.risk.variance),
                                 format_double(t.risk.total),
                                 format_double(t.risk_ratio),
                                 format_double(t.beta)};
    if (config.record_timing)
      row.push_back(fmt_opt(t.wall_time_ms));
    f.row(row);
  }
  for (const auto &m : r.medians) {
    std::vector<std::string> row{to_string(m.sampler), std::to_string(m.p),
                                 "median", std::to_string(config.seed), "", "", "",
                                 "", format_double(m.median_ratio), ""};
    if (config.record_timing)
      row.push_back("");
    f.row(row);
  }
  f.close();
}

void write_summary_table(const ResultTable &r, const ExperimentConfig &config,
                         const std::filesystem::path &path) {
  CsvFile f(path, config, ExperimentKind::SummaryTable);
  std::vector<std::string> head{"dataset", "kernel", "sampler",  "p",
                                "seed",    "row",    "d_eff",    "d_mof",
                                "bias_sq", "variance", "risk",   "risk_ratio",
                                "beta"};
  if (config.record_timing)
    head.push_back("wall_time_ms");
  f.row(head);
  auto emit = [&](const SummaryRow &s) {
    std::vector<std::string> row{s.dataset,
                                 s.kernel,
                                 to_string(s.sampler),
                                 std::to_string(s.p),
                                 std::to_string(s.seed),
                                 s.median ? "median" : "trial",
                                 format_double(s.d_eff),
                                 format_double(s.d_mof),
                                 format_double(s.bias_sq),
                                 format_double(s.variance),
                                 format_double(s.risk),
                                 format_double(s.risk_ratio),
                                 format_double(s.beta)};
    if (config.record_timing)
      row.push_back(fmt_opt(s.wall_time_ms));
    f.row(row);
  };
  for (const auto &s : r.rows)
    emit(s);
  for (const auto &s : r.medians)
    emit(s);
  f.close();
}

void write_concentration(const ConcentrationResult &r,
                         const ExperimentConfig &config,
                         const std::filesystem::path &path) {
  CsvFile f(path, config, ExperimentKind::Concentration);
  f.comment("gamma = " + format_double(r.gamma));
  f.row({"sampler", "p", "trials", "t", "empirical", "bound", "bound_capped",
         "beta", "lambda_max_psi", "frob_sq"});
  for (std::size_t s = 0; s < r.samplers.size(); ++s) {
    const auto &tail = r.tails[s];
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
      f.row({to_string(r.samplers[s]), std::to_string(tail.p),
             std::to_string(tail.trials), format_double(tail.t_grid[i]),
             format_double(tail.empirical[i]), format_double(tail.bound[i]),
             format_double(std::min(tail.bound[i], 1.0)),
             format_double(tail.beta_used), format_double(tail.lambda_max_psi),
             format_double(tail.frob_sq)});
  }
  f.close();
}

void write_score_approximation(const ScoreApproximation &r,
                               const ExperimentConfig &config,
                               const std::filesystem::path &path) {
  CsvFile f(path, config, ExperimentKind::ScoreApproximation);
  f.comment("p = " + std::to_string(r.p));
  f.comment("success_fraction = " + format_double(r.success_fraction));
  f.comment("target = " + format_double(r.target));
  f.comment("upper_violations = " + std::to_string(r.upper_violations));
  f.row({"trial", "seed", "max_error", "upper_violated", "additive_ok"});
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto &tr = r.trials[t];
    f.row({std::to_string(t), std::to_string(tr.seed), format_double(tr.max_error),
           tr.upper_violated ? "1" : "0", tr.additive_ok ? "1" : "0"});
  }
  f.close();
}

std::filesystem::path run_experiment(const Problem &pb,
                                     const ExperimentConfig &config,
                                     ExperimentKind kind) {
  const auto path = config.output_dir / (to_string(kind) + ".csv");
  switch (kind) {
  case ExperimentKind::LeverageProfile:
    write_leverage_profile(run_leverage_profile(pb, config), config, path);
    break;
  case ExperimentKind::RiskCurve:
    write_risk_curve(run_risk_curve(pb, config), config, path);
    break;
  case ExperimentKind::SummaryTable:
    write_summary_table(run_summary_table(pb, config), config, path);
    break;
  case ExperimentKind::Concentration:
    write_concentration(run_concentration(pb, config), config, path);
    break;
  case ExperimentKind::ScoreApproximation:
    write_score_approximation(run_score_approximation(pb, config), config, path);
    break;
  }
  return path;
}

} // namespace krrlev
