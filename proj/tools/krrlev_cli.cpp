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

// Batch driver: krrlev --config run.ini [--experiment NAME] [--seed N]
//                      [--out DIR] [--trials N]
//
// Exit codes: 0 success, 1 config error, 2 runtime/numerical error,
// 3 IO error.

#include "krrlev/config.hpp"
#include "krrlev/errors.hpp"
#include "krrlev/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kRuntimeFailure = 2;
constexpr int kIoFailure = 3;

int classify(const std::exception &e) {
  if (dynamic_cast<const krrlev::ConfigError *>(&e))
    return kConfigFailure;
  if (dynamic_cast<const krrlev::IoError *>(&e))
    return kIoFailure;
  return kRuntimeFailure;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Nystrom kernel ridge regression experiments"};
  std::string config_path;
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> trials;
  app.add_option("--config", config_path, "INI experiment configuration")
      ->required();
  app.add_option("--experiment", experiment,
                 "experiment name(s), comma separated; overrides the config");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--trials", trials, "trials per (sampler, p)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigFailure;
  }

  krrlev::ExperimentConfig config;
  try {
    config = krrlev::load_config(config_path);
    if (!experiment.empty()) {
      config.experiments.clear();
      std::istringstream is(experiment);
      std::string name;
      while (std::getline(is, name, ','))
        if (!name.empty())
          config.experiments.push_back(krrlev::parse_experiment_kind(name));
    }
    if (seed)
      config.seed = *seed;
    if (!out_dir.empty())
      config.output_dir = out_dir;
    if (trials)
      config.trials = *trials;
    config.validate();
  } catch (const std::exception &e) {
    std::cerr << "krrlev: " << e.what() << '\n';
    return classify(e);
  }

  std::optional<krrlev::Problem> problem;
  try {
    problem = krrlev::prepare_problem(config, krrlev::load_dataset(config));
  } catch (const std::exception &e) {
    std::cerr << "krrlev: dataset: " << e.what() << '\n';
    return classify(e);
  }

  int status = kOk;
  for (auto kind : config.experiments) {
    try {
      const auto path = krrlev::run_experiment(*problem, config, kind);
      std::cout << krrlev::to_string(kind) << ": " << path.string() << '\n';
    } catch (const std::exception &e) {
      std::cerr << "krrlev: experiment " << krrlev::to_string(kind)
                << " failed: " << e.what() << '\n';
      if (status == kOk)
        status = classify(e);
    }
  }
  return status;
}
