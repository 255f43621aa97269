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

#include "lanewatch/monitor/gamma_fit.hpp"

namespace lanewatch::monitor {

struct ScoreSeries {
  std::vector<double> scores;
  std::vector<double> timestamps;
  std::string estimator;
  std::string episode;

  /// Equal lengths, strictly increasing timestamps, non-negative scores.
  void validate() const;
};

/// Max over consecutive non-overlapping windows of `window_len_frames`
/// scores. A trailing partial window is dropped.
std::vector<double> window_scores(std::span<const double> scores, std::size_t window_len_frames);

std::vector<double> window_scores(const ScoreSeries& series, std::size_t window_len_frames);

/// Online form of window_scores + threshold comparison.
class MonitorState {
 public:
  MonitorState(std::size_t window_len_frames, GammaModel model);

  /// Feeds one frame score. Returns the alarm decision when this frame
  /// completes a window, nothing otherwise.
  std::optional<bool> step(double score);

  std::size_t window_len_frames() const { return window_len_; }
  std::size_t frames_in_window() const { return frames_; }
  double running_max() const { return running_max_; }
  const GammaModel& model() const { return model_; }

 private:
  std::size_t window_len_;
  GammaModel model_;
  std::size_t frames_ = 0;
  double running_max_ = 0.0;
};

inline std::optional<bool> monitor_step(MonitorState& state, double score) { return state.step(score); }

}  // namespace lanewatch::monitor
