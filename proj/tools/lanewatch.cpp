// Copyright 2026 The Lanewatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/study/commands.hpp"
#include "lanewatch/study/config.hpp"

namespace {

using lanewatch::study::RunOptions;
using lanewatch::study::StudyConfig;

struct Flags {
  std::string config = "configs/study.json";
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> estimator;
  std::optional<std::string> benchmark;
  std::optional<double> gamma;
  int jobs = 1;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Study config (JSON)")->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Override the study base seed");
  cmd->add_option("--estimator", f.estimator, "Only this estimator id (compare: A,B)");
  cmd->add_option("--benchmark", f.benchmark, "Only this benchmark id (simulate also accepts 'nominal')");
  cmd->add_option("--gamma", f.gamma, "Confidence for summary tables and comparisons")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--jobs", f.jobs, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-based failure prediction workbench for a toy lane-keeping controller"};
  app.require_subcommand(1);
  Flags flags;
  const char* names[] = {"train", "simulate", "calibrate", "evaluate", "bench", "compare", "reproduce"};
  const char* help[] = {
      "Train controllers, ensemble members and the autoencoder; apply the solidity filter",
      "Run benchmark, calibration and nominal episodes and write traces",
      "Fit the Gamma threshold model on each nominal calibration trace",
      "Label detection windows and write the report grid",
      "Measure per-frame estimator latency",
      "Mann-Whitney U and Cohen's d between estimators' F3 cells",
      "train, simulate, calibrate, evaluate, bench and compare in sequence"};
  for (std::size_t i = 0; i < std::size(names); ++i) add_common(app.add_subcommand(names[i], help[i]), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lanewatch::exit_code(lanewatch::ErrorKind::kConfig);
  }

  try {
    const StudyConfig cfg = lanewatch::study::load_study_config(flags.config);
    RunOptions opt;
    opt.out = flags.out;
    opt.seed = flags.seed;
    opt.estimator = flags.estimator;
    opt.benchmark = flags.benchmark;
    opt.gamma = flags.gamma;
    opt.jobs = flags.jobs;
    opt.log = &std::cerr;
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "train") {
      lanewatch::study::cmd_train(cfg, opt);
    } else if (cmd == "simulate") {
      lanewatch::study::cmd_simulate(cfg, opt);
    } else if (cmd == "calibrate") {
      lanewatch::study::cmd_calibrate(cfg, opt);
    } else if (cmd == "evaluate") {
      lanewatch::study::cmd_evaluate(cfg, opt);
    } else if (cmd == "bench") {
      lanewatch::study::cmd_bench(cfg, opt);
    } else if (cmd == "compare") {
      lanewatch::study::cmd_compare(cfg, opt);
    } else {
      lanewatch::study::cmd_reproduce(cfg, opt);
    }
  } catch (const lanewatch::Error& e) {
    std::cerr << "error [" << lanewatch::to_string(e.kind()) << "]: " << e.what() << '\n';
    return lanewatch::exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return lanewatch::exit_code(lanewatch::ErrorKind::kIo);
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
