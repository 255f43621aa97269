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

#include "lanewatch/monitor/calibration.hpp"

#include <cmath>

#include <json.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::monitor {

double CalibrationArtifact::threshold(double confidence) const {
  for (const auto& t : thresholds) {
    if (std::abs(t.confidence - confidence) < 1e-12) return t.threshold;
  }
  fail(ErrorKind::kConfig, "calibration for " + estimator + "/" + benchmark +
                               " has no threshold at confidence " + format_short(confidence));
}

GammaModel CalibrationArtifact::model(double confidence) const {
  return {shape, scale, confidence, threshold(confidence)};
}

CalibrationArtifact calibrate(std::span<const double> windowed_nominal_scores,
                              std::span<const double> confidences) {
  const GammaFit fit = fit_gamma(windowed_nominal_scores);
  CalibrationArtifact out;
  out.shape = fit.shape;
  out.scale = fit.scale;
  out.sample_count = windowed_nominal_scores.size();
  for (double c : confidences) out.thresholds.push_back({c, threshold_for(fit.shape, fit.scale, c)});
  return out;
}

std::string serialize_calibration(const CalibrationArtifact& a) {
  nlohmann::ordered_json j;
  j["format"] = "lanewatch-calibration";
  j["version"] = 1;
  j["estimator"] = a.estimator;
  j["benchmark"] = a.benchmark;
  j["window_len_frames"] = a.window_len_frames;
  j["shape"] = a.shape;
  j["scale"] = a.scale;
  j["sample_count"] = a.sample_count;
  j["thresholds"] = nlohmann::ordered_json::array();
  for (const auto& t : a.thresholds) {
    nlohmann::ordered_json e;
    e["confidence"] = t.confidence;
    e["threshold"] = t.threshold;
    j["thresholds"].push_back(e);
  }
  j["nominal_trace"] = a.nominal_trace;
  j["nominal_trace_checksum"] = a.nominal_trace_checksum;
  return j.dump(2) + "\n";
}

CalibrationArtifact parse_calibration(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "lanewatch-calibration" || j.value("version", 0) != 1) {
      fail(ErrorKind::kParse, "not a version-1 calibration artifact");
    }
    CalibrationArtifact a;
    a.estimator = j.at("estimator").get<std::string>();
    a.benchmark = j.at("benchmark").get<std::string>();
    a.window_len_frames = j.at("window_len_frames").get<std::size_t>();
    a.shape = j.at("shape").get<double>();
    a.scale = j.at("scale").get<double>();
    a.sample_count = j.at("sample_count").get<std::size_t>();
    for (const auto& e : j.at("thresholds")) {
      a.thresholds.push_back({e.at("confidence").get<double>(), e.at("threshold").get<double>()});
    }
    a.nominal_trace = j.at("nominal_trace").get<std::string>();
    a.nominal_trace_checksum = j.at("nominal_trace_checksum").get<std::string>();
    return a;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("calibration artifact: ") + e.what());
  }
}

void save_calibration(const CalibrationArtifact& artifact, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_calibration(artifact));
}

CalibrationArtifact load_calibration(const std::filesystem::path& path) {
  return parse_calibration(read_file(path));
}

}  // namespace lanewatch::monitor
