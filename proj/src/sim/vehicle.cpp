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

#include "lanewatch/sim/vehicle.hpp"

#include <cmath>

#include "lanewatch/common/error.hpp"

namespace lanewatch::sim {

VehicleState step(const VehicleState& state, double steering, double dt) {
  require(dt > 0.0, ErrorKind::kPrecondition, "time step must be positive");
  require(std::abs(steering) <= kMaxSteering, ErrorKind::kPrecondition,
          "steering command exceeds +-0.5 rad");
  require(state.speed > 0.0, ErrorKind::kPrecondition, "vehicle speed must be positive");
  VehicleState next = state;
  next.position.x += state.speed * std::cos(state.heading) * dt;
  next.position.y += state.speed * std::sin(state.heading) * dt;
  next.heading = wrap_angle(state.heading + state.speed / state.wheelbase * std::tan(steering) * dt);
  return next;
}

VehicleState state_on_track(const Track& track, double s, double lateral_offset, double speed) {
  const Vec2 c = track.point_at(s);
  const double h = track.heading_at(s);
  VehicleState out;
  out.position = {c.x - std::sin(h) * lateral_offset, c.y + std::cos(h) * lateral_offset};
  out.heading = wrap_angle(h);
  out.speed = speed;
  return out;
}

}  // namespace lanewatch::sim
