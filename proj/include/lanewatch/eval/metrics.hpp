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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanewatch/sim/episode.hpp"

namespace lanewatch::eval {

struct EvalConfig {
  std::vector<int> ttf_list{1, 2, 3};  // seconds
  double beta = 3.0;
  std::vector<double> confidences{0.95, 0.99, 0.999, 0.9999, 0.99999};
  double window_seconds = 1.0;

  void validate() const;
};

/// Frames [begin, end) and the maximum score inside.
struct ScoredWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  double max_score = 0.0;
};

struct PositiveWindow {
  std::size_t failure_frame = 0;
  int ttf = 1;
  ScoredWindow window;
};

struct DetectionWindowSet {
  std::size_t window_len = 0;
  std::vector<PositiveWindow> positives;
  std::vector<ScoredWindow> negatives;
  std::vector<std::string> warnings;

  std::vector<double> positive_scores(int ttf) const;
  std::vector<double> negative_scores() const;
  std::size_t positive_count(int ttf) const;
  /// Pools another trace's windows; window lengths may differ between traces.
  void append(const DetectionWindowSet& other);
};

/// Nominal traces give back-to-back negative windows from frame 0; other
/// traces give, per failure onset f and TTF k, the window
/// [f - k*w, f - (k-1)*w). Positive windows touching an off-track frame or
/// the first `window_seconds` after a reset are dropped.
DetectionWindowSet label_windows(const sim::SimTrace& trace, const EvalConfig& cfg);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  /// 1 when there was nothing to predict (TP+FP = 0 and TP+FN = 0), 0 when
  /// nothing was predicted but failures existed.
  double precision() const;
  /// 1 when there are no positives.
  double recall() const;
  /// FP / (FP + TN); 0 without negatives.
  double false_alarm_rate() const;
  Confusion& operator+=(const Confusion& o);
};

/// Alarm iff window max > tau, for one TTF.
Confusion confusion(const DetectionWindowSet& windows, double tau, int ttf);

double f_beta(double precision, double recall, double beta);

/// Probability that a random positive outranks a random negative, ties 1/2.
double auc_roc(std::span<const double> pos, std::span<const double> neg);

struct StatTestResult {
  double u = 0.0;
  double p_value = 1.0;
  std::optional<double> cohens_d;
  bool significant = false;
  bool exact = false;
};

inline constexpr double kAlpha = 0.05;
inline constexpr std::size_t kExactPairLimit = 400;

/// U of `a` with midranks; two-sided p exact (conditional on ties) when
/// n1*n2 <= 400, otherwise normal with tie and continuity correction.
StatTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// (mean a - mean b) / pooled sample standard deviation.
double cohens_d(std::span<const double> a, std::span<const double> b);

}  // namespace lanewatch::eval
