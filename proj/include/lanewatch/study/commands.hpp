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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lanewatch/bench/latency.hpp"
#include "lanewatch/eval/report.hpp"
#include "lanewatch/sim/track.hpp"
#include "lanewatch/study/config.hpp"

namespace lanewatch::study {

struct RunOptions {
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  /// Restricts simulate/calibrate/evaluate/bench to one estimator.
  std::optional<std::string> estimator;
  /// Restricts simulate/calibrate to one benchmark.
  std::optional<std::string> benchmark;
  /// Confidence used for summary tables and comparisons instead of each
  /// estimator's configured gamma.
  std::optional<double> gamma;
  int jobs = 1;
  std::ostream* log = nullptr;
};

/// Resolved artifact locations below RunOptions::out.
class Layout {
 public:
  Layout(const StudyConfig& cfg, std::filesystem::path out);

  std::filesystem::path mcd_model(double dropout_rate) const;
  std::filesystem::path member_model(std::uint64_t seed) const;
  std::filesystem::path ensemble_manifest(const EstimatorSpec& e) const;
  std::filesystem::path autoencoder_model() const;
  std::filesystem::path solidity_log() const;
  std::filesystem::path episode_trace(const std::string& estimator, const std::string& benchmark,
                                      std::uint64_t seed) const;
  std::filesystem::path calibration_trace(const std::string& estimator, const std::string& benchmark) const;
  std::filesystem::path nominal_trace(const std::string& estimator, std::uint64_t seed) const;
  std::filesystem::path calibration(const std::string& estimator, const std::string& benchmark) const;
  std::filesystem::path report_dir() const;
  std::filesystem::path bench_dir() const;

 private:
  std::filesystem::path models_, traces_, calibration_, reports_, bench_;
};

sim::Track study_track(const StudyConfig& cfg);

/// Behavioural-cloning controllers for every dropout rate and member seed,
/// the autoencoder, ensemble manifests and the solidity log. Models that
/// fail the admission filter are logged and left out of manifests.
void cmd_train(const StudyConfig& cfg, const RunOptions& opt);

/// Benchmark episodes, calibration runs and nominal (negative) runs for every
/// estimator, as trace files.
void cmd_simulate(const StudyConfig& cfg, const RunOptions& opt);

/// Gamma fit on each calibration trace's windowed scores.
void cmd_calibrate(const StudyConfig& cfg, const RunOptions& opt);

/// Full report grid, summary table and pairwise statistics.
eval::EvalReport cmd_evaluate(const StudyConfig& cfg, const RunOptions& opt);

std::vector<bench::BenchReport> cmd_bench(const StudyConfig& cfg, const RunOptions& opt);

struct Comparison {
  std::string first;
  std::string second;
  double first_confidence = 0.0;
  double second_confidence = 0.0;
  double first_mean_f3 = 0.0;
  double second_mean_f3 = 0.0;
  eval::StatTestResult test;
};

/// Mann-Whitney U on per-(benchmark, TTF) F3 cells for every estimator pair
/// (or the pair named "a,b" in --estimator).
std::vector<Comparison> cmd_compare(const StudyConfig& cfg, const RunOptions& opt);

/// train -> simulate -> calibrate -> evaluate -> bench -> compare.
void cmd_reproduce(const StudyConfig& cfg, const RunOptions& opt);

/// Table confidence for an estimator under `opt`.
double table_confidence(const EstimatorSpec& e, const RunOptions& opt);

}  // namespace lanewatch::study
