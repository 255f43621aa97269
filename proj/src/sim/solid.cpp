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

#include "lanewatch/sim/solid.hpp"

#include <cmath>

#include "lanewatch/common/error.hpp"

namespace lanewatch::sim {

std::size_t lap_steps(const Track& track, double laps, double dt) {
  require(dt > 0.0, ErrorKind::kPrecondition, "dt must be positive");
  return static_cast<std::size_t>(std::ceil(laps * track.length() / (kDefaultSpeed * dt)));
}

bool is_solid(const Controller& controller, const Track& track, int laps, double dt) {
  require(laps >= 2, ErrorKind::kPrecondition, "solidity needs at least two laps");
  EpisodeConfig cfg;
  cfg.dt = dt;
  cfg.max_steps = lap_steps(track, laps, dt);
  try {
    const SimTrace trace = run_episode(controller, track, PerturbationSpec::nominal(), nullptr, cfg);
    return trace.records.size() == cfg.max_steps && trace.off_track_frames() == 0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kLost) return false;
    throw;
  }
}

bool is_solid(const nnet::Regressor& model, const Track& track, int laps, double dt) {
  return is_solid(model_controller(model), track, laps, dt);
}

}  // namespace lanewatch::sim
