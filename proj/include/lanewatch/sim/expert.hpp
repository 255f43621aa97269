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

#include "lanewatch/nnet/training.hpp"
#include "lanewatch/sim/observation.hpp"

namespace lanewatch::sim {

inline constexpr double kExpertLookahead = 6.0;  // m

/// Pure pursuit toward the centerline point kExpertLookahead metres ahead:
/// delta = atan(2 L sin(alpha) / lookahead), clamped to +-0.5 rad.
double expert_steer(const VehicleState& state, const Track& track);

/// Behavioural-cloning data from expert rollouts. The executed command is the
/// expert's plus correlated noise, so the data covers recovery from lateral
/// drift; labels are always the clean expert command.
struct DemonstrationConfig {
  std::size_t frames = 12000;
  std::size_t episode_frames = 600;
  double dt = 0.05;
  double start_offset = 1.0;   // m, uniform +-
  double weave_std = 0.06;     // rad, stationary std of the command noise
  double weave_corr = 0.95;    // per-frame correlation of the command noise
  std::uint64_t seed = 1;
};

nnet::Dataset collect_demonstrations(const Track& track, const DemonstrationConfig& cfg,
                                     const ObservationConfig& obs = {});

}  // namespace lanewatch::sim
