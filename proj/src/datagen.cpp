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

#include "krrlev/datagen.hpp"

#include "krrlev/errors.hpp"
#include "krrlev/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace krrlev {

namespace {

constexpr std::uint64_t kPointStream = 0;
constexpr std::uint64_t kAnchorStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

void require_n(std::size_t n) {
  if (n < 2)
    throw std::invalid_argument("datagen: n must be >= 2");
}

std::vector<std::string> split_row(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace

std::string to_string(Density density) {
  switch (density) {
  case Density::UniformGrid:
    return "grid";
  case Density::Arcsine:
    return "arcsine";
  case Density::UniformRandom:
    return "uniform";
  case Density::SymmetricBeta:
    return "symmetric_beta";
  }
  return "unknown";
}

Density parse_density(std::string_view name) {
  for (auto d : {Density::UniformGrid, Density::Arcsine, Density::UniformRandom,
                 Density::SymmetricBeta})
    if (name == to_string(d))
      return d;
  throw std::invalid_argument("unknown density '" + std::string(name) + "'");
}

void SyntheticConfig::validate() const {
  require_n(n);
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw std::invalid_argument("SyntheticConfig: noise_sigma must be >= 0");
  if (anchors < 1)
    throw std::invalid_argument("SyntheticConfig: anchors must be >= 1");
  if (density == Density::SymmetricBeta && !(beta_shape > 0.0))
    throw std::invalid_argument("SyntheticConfig: beta_shape must be positive");
  KernelSpec::bernoulli(bernoulli_order);
}

PointSet grid_points(std::size_t n) {
  require_n(n);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = static_cast<double>(i) / static_cast<double>(n);
  return PointSet::from_scalars(xs);
}

double arcsine_transform(double u) {
  const double s = std::sin(std::numbers::pi * u / 2.0);
  return s * s;
}

PointSet arcsine_points(std::size_t n, std::uint64_t seed) {
  require_n(n);
  Rng rng = make_rng(seed, kPointStream);
  std::vector<double> xs(n);
  for (auto &x : xs)
    x = frac(arcsine_transform(uniform01(rng)));
  return PointSet::from_scalars(xs);
}

PointSet uniform_points(std::size_t n, std::uint64_t seed) {
  require_n(n);
  Rng rng = make_rng(seed, kPointStream);
  std::vector<double> xs(n);
  for (auto &x : xs)
    x = uniform01(rng);
  return PointSet::from_scalars(xs);
}

PointSet symmetric_beta_points(std::size_t n, double shape, std::uint64_t seed) {
  require_n(n);
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("symmetric_beta_points: shape must be positive");
  Rng rng = make_rng(seed, kPointStream);
  // X = G / (G + H) with G, H ~ Gamma(a). Small shapes underflow Gamma(a)
  // directly, so use log Gamma(a) = log Gamma(a + 1) + log(U) / a.
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  auto log_gamma_draw = [&] {
    const double g = gamma(rng);
    const double u = 1.0 - uniform01(rng); // (0, 1]
    return std::log(g) + std::log(u) / shape;
  };
  std::vector<double> xs(n);
  for (auto &x : xs) {
    const double lg = log_gamma_draw();
    const double lh = log_gamma_draw();
    // Keep draws that round up to 1 on the right side of the interval.
    x = std::min(1.0 / (1.0 + std::exp(lh - lg)), std::nextafter(1.0, 0.0));
  }
  return PointSet::from_scalars(xs);
}

FStar make_f_star(const PointSet &points, const KernelSpec &spec,
                  std::size_t anchors, std::uint64_t seed) {
  if (anchors < 1)
    throw std::invalid_argument("make_f_star: need at least one anchor");
  if (points.dim() != 1)
    throw std::invalid_argument("make_f_star: scalar inputs required");
  spec.validate();

  Rng rng = make_rng(seed, kAnchorStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(anchors);

  for (int attempt = 0; attempt < 2; ++attempt) {
    FStar f;
    f.anchors.resize(m);
    for (Eigen::Index k = 0; k < m; ++k)
      f.anchors(k) = uniform01(rng);
    f.coefficients.resize(m);
    for (Eigen::Index k = 0; k < m; ++k)
      f.coefficients(k) = normal(rng);

    const PointSet z = PointSet::from_scalars(
        std::span<const double>(f.anchors.data(), static_cast<std::size_t>(m)));
    const Eigen::MatrixXd kz = kernel_matrix(z, spec).entries;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(kz);
    const double norm_sq = f.coefficients.dot(kz * f.coefficients);
    const double scale = kz.diagonal().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        !(norm_sq > 1e-12 * scale * f.coefficients.squaredNorm()))
      continue;

    f.coefficients /= std::sqrt(norm_sq);
    if (f.coefficients(0) < 0.0)
      f.coefficients = -f.coefficients;
    f.rkhs_norm_sq = f.coefficients.dot(kz * f.coefficients);

    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    f.values = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < m; ++k) {
        const double zk = f.anchors(k);
        f.values(i) += f.coefficients(k) *
                       eval_kernel(spec, points.point(static_cast<std::size_t>(i)),
                                   std::span<const double>(&zk, 1));
      }
    return f;
  }
  throw NumericalError("make_f_star: anchor Gram matrix is singular");
}

RegressionDataset synthesize(const SyntheticConfig &config) {
  config.validate();
  const KernelSpec spec = KernelSpec::bernoulli(config.bernoulli_order);

  PointSet points = [&] {
    switch (config.density) {
    case Density::UniformGrid:
      return grid_points(config.n);
    case Density::Arcsine:
      return arcsine_points(config.n, config.seed);
    case Density::UniformRandom:
      return uniform_points(config.n, config.seed);
    case Density::SymmetricBeta:
      return symmetric_beta_points(config.n, config.beta_shape, config.seed);
    }
    throw std::invalid_argument("synthesize: unknown density");
  }();

  const FStar f = make_f_star(points, spec, config.anchors, config.seed);

  Eigen::VectorXd y = f.values;
  if (config.noise_sigma > 0.0) {
    Rng rng = make_rng(config.seed, kNoiseStream);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y(i) += config.noise_sigma * normal(rng);
  }

  GroundTruth truth{f.values, config.noise_sigma * config.noise_sigma};
  return RegressionDataset{"synthetic-" + to_string(config.density),
                           std::move(points),
                           std::move(y),
                           std::move(truth),
                           spec,
                           {"x"}};
}

RegressionDataset load_csv(const std::filesystem::path &path,
                           std::string_view target_column, bool standardize) {
  std::ifstream in(path);
  if (!in)
    throw IoError("load_csv: cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line))
    throw IoError("load_csv: '" + path.string() + "' is empty");
  std::vector<std::string> header = split_row(line);
  for (auto &h : header)
    h = trim(h);

  std::ptrdiff_t target = -1;
  std::ptrdiff_t fstar = -1;
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == target_column)
      target = static_cast<std::ptrdiff_t>(c);
    else if (header[c] == "f_star")
      fstar = static_cast<std::ptrdiff_t>(c);
    else {
      feature_cols.push_back(c);
      feature_names.push_back(header[c]);
    }
  }
  if (target < 0)
    throw IoError("load_csv: target column '" + std::string(target_column) +
                  "' not found");
  if (feature_cols.empty())
    throw IoError("load_csv: no feature columns");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size())
      throw IoError("load_csv: row " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(header.size()));
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      const char *first = cell.data();
      const char *last = cell.data() + cell.size();
      if (first != last && *first == '+')
        ++first;
      const auto res = std::from_chars(first, last, values[c]);
      if (cell.empty() || res.ec != std::errc() || res.ptr != last ||
          !std::isfinite(values[c]))
        throw IoError("load_csv: non-numeric cell '" + cell + "' at row " +
                      std::to_string(line_no) + ", column '" + header[c] + "'");
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2)
    throw IoError("load_csv: need at least 2 data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(feature_cols.size());
  PointMatrix x(n, d);
  Eigen::VectorXd y(n);
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &r = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j)
      x(i, j) = r[feature_cols[static_cast<std::size_t>(j)]];
    y(i) = r[static_cast<std::size_t>(target)];
    if (fstar >= 0)
      f(i) = r[static_cast<std::size_t>(fstar)];
  }

  if (standardize) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mean = x.col(j).mean();
      const double var = (x.col(j).array() - mean).square().mean();
      x.col(j) = (x.col(j).array() - mean) / std::sqrt(std::max(var, 1e-12));
    }
  }

  std::optional<GroundTruth> truth;
  if (fstar >= 0)
    truth = GroundTruth{f, 0.0};
  return RegressionDataset{path.stem().string(), PointSet(std::move(x)),
                           std::move(y),         std::move(truth),
                           KernelSpec::linear(), std::move(feature_names)};
}

void write_csv(const RegressionDataset &dataset,
               const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("write_csv: cannot open '" + path.string() + "'");
  const std::size_t d = dataset.points.dim();
  for (std::size_t j = 0; j < d; ++j) {
    out << (j < dataset.feature_names.size() ? dataset.feature_names[j]
                                             : "x" + std::to_string(j))
        << ',';
  }
  out << 'y';
  if (dataset.truth)
    out << ",f_star";
  out << '\n';
  for (std::size_t i = 0; i < dataset.points.size(); ++i) {
    for (double v : dataset.points.point(i))
      out << format_double(v) << ',';
    out << format_double(dataset.y(static_cast<Eigen::Index>(i)));
    if (dataset.truth)
      out << ',' << format_double(dataset.truth->f_star(static_cast<Eigen::Index>(i)));
    out << '\n';
  }
  if (!out)
    throw IoError("write_csv: write failed for '" + path.string() + "'");
}

} // namespace krrlev
