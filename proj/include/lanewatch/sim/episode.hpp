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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/common/rng.hpp"
#include "lanewatch/nnet/regressor.hpp"
#include "lanewatch/sim/observation.hpp"
#include "lanewatch/uq/estimators.hpp"

namespace lanewatch::sim {

struct ControlContext {
  std::span<const double> observation;
  const VehicleState& state;
  const Track& track;
};

/// Steering command (rad) for one frame; clamped to +-0.5 by the episode.
using Controller = std::function<double(const ControlContext&)>;

/// Per-frame uncertainty score from the observation the controller sees.
using Estimator = std::function<double(std::span<const double> observation, Rng& rng)>;

Controller expert_controller();
/// Deterministic single network (dropout disabled).
Controller model_controller(nnet::Regressor model);
/// Ensemble mean.
Controller ensemble_controller(uq::Ensemble ensemble);

Estimator mcd_estimator(nnet::Regressor model, uq::McdConfig cfg);
Estimator de_estimator(uq::Ensemble ensemble);
Estimator ae_estimator(uq::AutoencoderScorer scorer);

struct TraceRecord {
  double t = 0.0;
  std::vector<double> observation;
  double steering = 0.0;
  double score = 0.0;
  bool off_track = false;
};

struct TraceMeta {
  double dt = 0.05;
  std::string track_id;
  PerturbationSpec perturbation;
  std::string model_id;
  std::string estimator_id;
  std::string benchmark;
  bool mutant = false;
  std::string termination = "completed";
};

struct SimTrace {
  TraceMeta meta;
  std::vector<TraceRecord> records;

  /// Unperturbed run of an unmutated model: contributes negatives only.
  bool is_nominal() const { return meta.perturbation.tier == Tier::kNominal && !meta.mutant; }

  /// Frames where an off-track period begins.
  std::vector<std::size_t> failure_onsets() const;
  std::size_t off_track_frames() const;
  std::vector<double> scores() const;
};

struct EpisodeConfig {
  double dt = 0.05;
  std::size_t max_steps = 2000;
  double start_arc = 0.0;
  double start_offset = 0.0;
  double speed = kDefaultSpeed;
  /// Seeds the estimator's random stream (independent of the perturbation).
  std::uint64_t seed = 0;
  std::string model_id;
  std::string estimator_id;
  std::string benchmark;
  bool mutant = false;
};

/// Closed loop: observe -> score -> control -> step. A frame whose lateral
/// offset exceeds the lane half-width is labelled off-track and the vehicle
/// is placed back on the nearest centerline point for the next frame.
SimTrace run_episode(const Controller& controller, const Track& track,
                     const PerturbationSpec& spec, const Estimator* estimator,
                     const EpisodeConfig& cfg);

/// (frames - 1) / (last t - first t).
double frame_rate(const SimTrace& trace);
double frame_rate(std::span<const double> timestamps);

/// Frames per detection window: round(fps * seconds), at least 1.
std::size_t window_len_frames(double fps, double seconds = 1.0);

// Trace files: JSON lines. The first line is the metadata header, every
// following line one frame {"t", "obs", "steer", "score", "off_track"}.
std::string serialize_trace(const SimTrace& trace);
SimTrace parse_trace(std::string_view text);
void save_trace(const SimTrace& trace, const std::filesystem::path& path);
SimTrace load_trace(const std::filesystem::path& path);

}  // namespace lanewatch::sim
