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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/monitor/gamma_fit.hpp"

namespace lanewatch::monitor {

struct ThresholdEntry {
  double confidence = 0.0;
  double threshold = 0.0;
};

/// One Gamma fit per (estimator, benchmark) nominal run; every confidence
/// level reads its threshold from the same (shape, scale).
struct CalibrationArtifact {
  std::string estimator;
  std::string benchmark;
  std::size_t window_len_frames = 0;
  double shape = 0.0;
  double scale = 0.0;
  std::size_t sample_count = 0;
  std::vector<ThresholdEntry> thresholds;
  std::string nominal_trace;
  std::string nominal_trace_checksum;

  double threshold(double confidence) const;
  GammaModel model(double confidence) const;
};

CalibrationArtifact calibrate(std::span<const double> windowed_nominal_scores,
                              std::span<const double> confidences);

std::string serialize_calibration(const CalibrationArtifact& artifact);
CalibrationArtifact parse_calibration(std::string_view text);
void save_calibration(const CalibrationArtifact& artifact, const std::filesystem::path& path);
CalibrationArtifact load_calibration(const std::filesystem::path& path);

}  // namespace lanewatch::monitor
