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

#include <cmath>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/eval/metrics.hpp"
#include "lanewatch/monitor/calibration.hpp"

namespace lanewatch::eval {

inline constexpr int kAverageTtf = 0;
inline constexpr const char* kAllBenchmarks = "all";

/// Windows and thresholds of one (estimator, benchmark) pair.
struct BenchmarkWindows {
  std::string benchmark;
  DetectionWindowSet positives;
  DetectionWindowSet negatives;
  std::vector<monitor::ThresholdEntry> thresholds;
};

/// One cell of the report. ttf == kAverageTtf marks the mean over TTFs;
/// benchmark == "all" the mean over benchmarks. Metrics are NaN when the
/// cell has no failures to predict; such cells are skipped in averages.
struct MetricRow {
  std::string estimator;
  std::string benchmark;
  int ttf = 1;
  double confidence = 0.0;
  double threshold = 0.0;
  Confusion counts;
  double precision = 0.0;
  double recall = 0.0;
  double f3 = 0.0;
  double auc = 0.0;

  bool has_failures() const { return !std::isnan(f3); }
};

/// Artifacts behind the rows of one (estimator, benchmark) pair.
struct RowSource {
  std::string estimator;
  std::string benchmark;
  std::vector<std::string> models;
  std::string calibration;
  std::vector<std::string> traces;
};

struct EvalReport {
  std::vector<MetricRow> rows;
  std::vector<RowSource> sources;
  std::vector<std::string> warnings;

  const MetricRow* find(std::string_view estimator, std::string_view benchmark, int ttf,
                        double confidence) const;
  /// F3 of every (benchmark, TTF) cell with failures, benchmark "all" and
  /// averages excluded.
  std::vector<double> f3_cells(std::string_view estimator, double confidence) const;
  std::vector<std::string> estimators() const;
  void merge(const EvalReport& other);
};

EvalReport evaluate(const std::string& estimator, std::span<const BenchmarkWindows> benchmarks,
                    const EvalConfig& cfg);

/// Long form: one line per row with counts and metrics.
std::string to_csv(const EvalReport& report);

/// Wide layout: benchmark, TTF, then Pr/Re/F3 (percent) per (estimator, confidence).
std::string to_table(const EvalReport& report,
                     std::span<const std::pair<std::string, double>> methods);

std::string serialize_report(const EvalReport& report);
EvalReport parse_report(std::string_view text);
void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

}  // namespace lanewatch::eval
