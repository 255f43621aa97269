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

#include "lanewatch/sim/expert.hpp"

#include <algorithm>
#include <cmath>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::sim {

double expert_steer(const VehicleState& state, const Track& track) {
  const Projection proj = track.project(state.position);
  if (std::abs(proj.lateral) > kLostLaneWidths * 2.0 * track.lane_half_width()) {
    fail(ErrorKind::kLost, "expert lost the track (offset " + format_short(proj.lateral) + " m)");
  }
  const Vec2 target = track.point_at(proj.arc + kExpertLookahead);
  const double dx = target.x - state.position.x;
  const double dy = target.y - state.position.y;
  const double c = std::cos(state.heading);
  const double s = std::sin(state.heading);
  const double alpha = std::atan2(-s * dx + c * dy, c * dx + s * dy);
  const double delta = std::atan(2.0 * state.wheelbase * std::sin(alpha) / kExpertLookahead);
  return std::clamp(delta, -kMaxSteering, kMaxSteering);
}

nnet::Dataset collect_demonstrations(const Track& track, const DemonstrationConfig& cfg,
                                     const ObservationConfig& obs) {
  require(cfg.frames > 0 && cfg.episode_frames > 0 && cfg.dt > 0.0, ErrorKind::kConfig,
          "demonstration sizes and dt must be positive");
  require(cfg.weave_corr >= 0.0 && cfg.weave_corr < 1.0, ErrorKind::kConfig,
          "weave correlation must lie in [0, 1)");
  Rng rng(cfg.seed);
  nnet::Dataset data;
  data.provenance = nnet::Provenance::kNominal;
  const double innovation = cfg.weave_std * std::sqrt(1.0 - cfg.weave_corr * cfg.weave_corr);
  const double recover_at = 0.75 * track.lane_half_width();

  while (data.size() < cfg.frames) {
    VehicleState state = state_on_track(track, rng.uniform(0.0, track.length()),
                                        rng.uniform(-cfg.start_offset, cfg.start_offset));
    double noise = 0.0;
    for (std::size_t f = 0; f < cfg.episode_frames && data.size() < cfg.frames; ++f) {
      const Projection proj = track.project(state.position);
      if (std::abs(proj.lateral) > track.lane_half_width()) break;
      const double label = expert_steer(state, track);
      data.inputs.push_back(clean_features(state, track, obs));
      data.targets.push_back({label});
      noise = cfg.weave_corr * noise + innovation * rng.normal();
      const double applied = std::abs(proj.lateral) > recover_at ? label : label + noise;
      state = step(state, std::clamp(applied, -kMaxSteering, kMaxSteering), cfg.dt);
    }
  }
  return data;
}

}  // namespace lanewatch::sim
