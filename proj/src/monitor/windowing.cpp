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

#include "lanewatch/monitor/windowing.hpp"

#include <algorithm>
#include <cmath>

#include "lanewatch/common/error.hpp"

namespace lanewatch::monitor {

void ScoreSeries::validate() const {
  require(scores.size() == timestamps.size(), ErrorKind::kShape,
          "score series has mismatched scores and timestamps");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    require(scores[i] >= 0.0, ErrorKind::kInput, "score series contains a negative score");
    if (i > 0) {
      require(timestamps[i] > timestamps[i - 1], ErrorKind::kInput,
              "score series timestamps are not strictly increasing");
    }
  }
}

std::vector<double> window_scores(std::span<const double> scores, std::size_t window_len_frames) {
  require(window_len_frames >= 1, ErrorKind::kConfig, "window length must be at least one frame");
  const std::size_t n_windows = scores.size() / window_len_frames;
  std::vector<double> out;
  out.reserve(n_windows);
  for (std::size_t w = 0; w < n_windows; ++w) {
    const auto first = scores.begin() + static_cast<std::ptrdiff_t>(w * window_len_frames);
    out.push_back(*std::max_element(first, first + static_cast<std::ptrdiff_t>(window_len_frames)));
  }
  return out;
}

std::vector<double> window_scores(const ScoreSeries& series, std::size_t window_len_frames) {
  series.validate();
  return window_scores(series.scores, window_len_frames);
}

MonitorState::MonitorState(std::size_t window_len_frames, GammaModel model)
    : window_len_(window_len_frames), model_(model) {
  require(window_len_ >= 1, ErrorKind::kConfig, "window length must be at least one frame");
  require(model_.threshold > 0.0, ErrorKind::kConfig, "monitor needs a calibrated threshold");
}

std::optional<bool> MonitorState::step(double score) {
  require(score >= 0.0 && !std::isnan(score), ErrorKind::kInput, "monitor received a negative score");
  running_max_ = frames_ == 0 ? score : std::max(running_max_, score);
  if (++frames_ < window_len_) return std::nullopt;
  const bool alarm = running_max_ > model_.threshold;
  frames_ = 0;
  running_max_ = 0.0;
  return alarm;
}

}  // namespace lanewatch::monitor
