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

#include "krrlev/config.hpp"

#include "krrlev/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace krrlev {

namespace pt = boost::property_tree;

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string &value) {
  std::vector<std::string> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

double to_double(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("'" + key + "': expected a number, got '" + value + "'");
  return out;
}

std::uint64_t to_uint(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("'" + key + "': expected a nonnegative integer, got '" +
                      value + "'");
  return out;
}

bool to_bool(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  throw ConfigError("'" + key + "': expected true/false, got '" + value + "'");
}

const std::map<std::string, std::set<std::string>> &known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"experiment", {"name", "seed", "trials", "output_dir", "record_timing"}},
      {"dataset",
       {"source", "name", "n", "density", "beta_shape", "bernoulli_order",
        "noise_sigma", "anchors", "seed", "path", "target", "standardize"}},
      {"kernel", {"family", "bandwidth", "order"}},
      {"model", {"lambda", "epsilon", "rho", "noise_sigma"}},
      {"sampling", {"samplers", "p_values", "p_multiplier", "approx_p"}},
      {"concentration", {"gamma", "t_grid", "p"}},
  };
  return keys;
}

} // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::LeverageProfile:
    return "leverage_profile";
  case ExperimentKind::RiskCurve:
    return "risk_curve";
  case ExperimentKind::SummaryTable:
    return "summary_table";
  case ExperimentKind::Concentration:
    return "concentration";
  case ExperimentKind::ScoreApproximation:
    return "score_approximation";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::LeverageProfile, ExperimentKind::RiskCurve,
                 ExperimentKind::SummaryTable, ExperimentKind::Concentration,
                 ExperimentKind::ScoreApproximation})
    if (name == to_string(k))
      return k;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string &msg) { throw ConfigError(msg); };
  if (experiments.empty())
    fail("no experiment selected");
  try {
    kernel.validate();
    if (dataset.source == DatasetSource::Synthetic)
      dataset.synthetic.validate();
  } catch (const std::invalid_argument &e) {
    fail(e.what());
  }
  if (dataset.source == DatasetSource::Csv && dataset.csv_path.empty())
    fail("dataset.path is required for csv datasets");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    fail("model.lambda must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    fail("model.epsilon must be in (0, 1/2)");
  if (!(rho > 0.0 && rho < 1.0))
    fail("model.rho must be in (0, 1)");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    fail("model.noise_sigma must be >= 0");
  if (samplers.empty())
    fail("sampling.samplers must not be empty");
  if (!(p_multiplier > 0.0) || !std::isfinite(p_multiplier))
    fail("sampling.p_multiplier must be positive");
  for (std::size_t p : p_values)
    if (p == 0)
      fail("sampling.p_values entries must be >= 1");
  if (concentration_gamma && !(*concentration_gamma > 0.0))
    fail("concentration.gamma must be positive");
  for (double t : t_grid)
    if (!(t > 0.0) || !std::isfinite(t))
      fail("concentration.t_grid entries must be positive");
  if (trials == 0)
    fail("experiment.trials must be >= 1");
  for (auto kind : experiments)
    if (kind == ExperimentKind::RiskCurve && p_values.empty())
      fail("risk_curve needs sampling.p_values");
  if (output_dir.empty())
    fail("experiment.output_dir must not be empty");
}

std::vector<std::string> ExperimentConfig::describe() const {
  std::vector<std::string> out;
  auto add = [&](const std::string &k, const std::string &v) {
    out.push_back(k + " = " + v);
  };
  auto join = [](const auto &items, auto &&to_str) {
    std::string s;
    for (const auto &item : items) {
      if (!s.empty())
        s += ",";
      s += to_str(item);
    }
    return s;
  };

  add("experiment.seed", std::to_string(seed));
  add("experiment.trials", std::to_string(trials));
  add("experiment.record_timing", record_timing ? "true" : "false");
  if (dataset.source == DatasetSource::Synthetic) {
    const auto &s = dataset.synthetic;
    add("dataset.source", "synthetic");
    add("dataset.n", std::to_string(s.n));
    add("dataset.density", to_string(s.density));
    if (s.density == Density::SymmetricBeta)
      add("dataset.beta_shape", fmt(s.beta_shape));
    add("dataset.bernoulli_order", std::to_string(s.bernoulli_order));
    add("dataset.noise_sigma", fmt(s.noise_sigma));
    add("dataset.anchors", std::to_string(s.anchors));
    add("dataset.seed", std::to_string(s.seed));
  } else {
    add("dataset.source", "csv");
    add("dataset.path", dataset.csv_path.filename().string());
    add("dataset.target", dataset.target);
    add("dataset.standardize", dataset.standardize ? "true" : "false");
  }
  if (!dataset.name.empty())
    add("dataset.name", dataset.name);
  add("kernel", kernel.describe());
  add("model.lambda", fmt(lambda));
  add("model.epsilon", fmt(epsilon));
  add("model.rho", fmt(rho));
  add("model.noise_sigma", fmt(noise_sigma));
  add("sampling.samplers",
      join(samplers, [](SamplerKind k) { return to_string(k); }));
  add("sampling.p_values",
      join(p_values, [](std::size_t p) { return std::to_string(p); }));
  add("sampling.p_multiplier", fmt(p_multiplier));
  add("sampling.approx_p", std::to_string(approx_p));
  add("concentration.gamma",
      concentration_gamma ? fmt(*concentration_gamma) : "lambda*epsilon");
  add("concentration.t_grid", join(t_grid, [](double t) { return fmt(t); }));
  add("concentration.p", std::to_string(concentration_p));
  add("rng", "mt19937_64; trial seeds splitmix64(base ^ splitmix64(k + 1))");
  return out;
}

ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path &base_dir) {
  pt::ptree tree;
  try {
    std::istringstream is{std::string(text)};
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("config parse error: ") + e.message() +
                      " (line " + std::to_string(e.line()) + ")");
  }

  for (const auto &[section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end() || body.empty())
      throw ConfigError("unknown config section '" + section + "'");
    for (const auto &[key, value] : body)
      if (!it->second.count(key))
        throw ConfigError("unknown key '" + section + "." + key + "'");
  }

  auto get = [&](const std::string &path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '/')))
      return trim(*v);
    return std::nullopt;
  };

  ExperimentConfig cfg;
  auto &syn = cfg.dataset.synthetic;

  if (auto v = get("experiment/name"))
    for (const auto &name : split_list(*v))
      cfg.experiments.push_back(parse_experiment_kind(name));
  if (auto v = get("experiment/seed"))
    cfg.seed = to_uint("experiment.seed", *v);
  if (auto v = get("experiment/trials"))
    cfg.trials = to_uint("experiment.trials", *v);
  if (auto v = get("experiment/output_dir"))
    cfg.output_dir = *v;
  if (auto v = get("experiment/record_timing"))
    cfg.record_timing = to_bool("experiment.record_timing", *v);

  if (auto v = get("dataset/source")) {
    if (*v == "synthetic")
      cfg.dataset.source = DatasetSource::Synthetic;
    else if (*v == "csv")
      cfg.dataset.source = DatasetSource::Csv;
    else
      throw ConfigError("dataset.source must be synthetic or csv");
  }
  if (auto v = get("dataset/name"))
    cfg.dataset.name = *v;
  if (auto v = get("dataset/n"))
    syn.n = to_uint("dataset.n", *v);
  try {
    if (auto v = get("dataset/density"))
      syn.density = parse_density(*v);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (auto v = get("dataset/beta_shape"))
    syn.beta_shape = to_double("dataset.beta_shape", *v);
  if (auto v = get("dataset/bernoulli_order"))
    syn.bernoulli_order = static_cast<int>(to_uint("dataset.bernoulli_order", *v));
  if (auto v = get("dataset/noise_sigma"))
    syn.noise_sigma = to_double("dataset.noise_sigma", *v);
  if (auto v = get("dataset/anchors"))
    syn.anchors = to_uint("dataset.anchors", *v);
  if (auto v = get("dataset/seed"))
    syn.seed = to_uint("dataset.seed", *v);
  if (auto v = get("dataset/path")) {
    std::filesystem::path p(*v);
    cfg.dataset.csv_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (auto v = get("dataset/target"))
    cfg.dataset.target = *v;
  if (auto v = get("dataset/standardize"))
    cfg.dataset.standardize = to_bool("dataset.standardize", *v);

  // Kernel defaults follow the dataset: Bernoulli of the generating order
  // for synthetic data, linear for CSV data.
  cfg.kernel = cfg.dataset.source == DatasetSource::Synthetic
                   ? KernelSpec{KernelFamily::Bernoulli, 1.0, syn.bernoulli_order}
                   : KernelSpec::linear();
  if (auto v = get("kernel/family")) {
    if (*v == "linear")
      cfg.kernel.family = KernelFamily::Linear;
    else if (*v == "rbf")
      cfg.kernel.family = KernelFamily::Rbf;
    else if (*v == "bernoulli")
      cfg.kernel.family = KernelFamily::Bernoulli;
    else
      throw ConfigError("kernel.family must be linear, rbf or bernoulli");
  }
  if (auto v = get("kernel/bandwidth"))
    cfg.kernel.bandwidth = to_double("kernel.bandwidth", *v);
  if (auto v = get("kernel/order"))
    cfg.kernel.order = static_cast<int>(to_uint("kernel.order", *v));

  if (auto v = get("model/lambda"))
    cfg.lambda = to_double("model.lambda", *v);
  if (auto v = get("model/epsilon"))
    cfg.epsilon = to_double("model.epsilon", *v);
  if (auto v = get("model/rho"))
    cfg.rho = to_double("model.rho", *v);
  if (auto v = get("model/noise_sigma"))
    cfg.noise_sigma = to_double("model.noise_sigma", *v);

  try {
    if (auto v = get("sampling/samplers")) {
      cfg.samplers.clear();
      for (const auto &name : split_list(*v))
        cfg.samplers.push_back(parse_sampler_kind(name));
    }
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (auto v = get("sampling/p_values"))
    for (const auto &item : split_list(*v))
      cfg.p_values.push_back(to_uint("sampling.p_values", item));
  if (auto v = get("sampling/p_multiplier"))
    cfg.p_multiplier = to_double("sampling.p_multiplier", *v);
  if (auto v = get("sampling/approx_p"))
    cfg.approx_p = to_uint("sampling.approx_p", *v);

  if (auto v = get("concentration/gamma"))
    cfg.concentration_gamma = to_double("concentration.gamma", *v);
  if (auto v = get("concentration/t_grid")) {
    cfg.t_grid.clear();
    for (const auto &item : split_list(*v))
      cfg.t_grid.push_back(to_double("concentration.t_grid", item));
  }
  if (auto v = get("concentration/p"))
    cfg.concentration_p = to_uint("concentration.p", *v);

  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

} // namespace krrlev
