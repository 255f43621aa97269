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

#include "lanewatch/sim/track.hpp"

namespace lanewatch::sim {

inline constexpr double kMaxSteering = 0.5;       // rad
inline constexpr double kDefaultSpeed = 13.4;     // m/s, about 30 mph
inline constexpr double kDefaultWheelbase = 2.5;  // m

struct VehicleState {
  Vec2 position;
  double heading = 0.0;  // rad, wrapped to (-pi, pi]
  double speed = kDefaultSpeed;
  double wheelbase = kDefaultWheelbase;
};

/// Kinematic bicycle, explicit Euler:
///   x += v cos(psi) dt,  y += v sin(psi) dt,  psi += (v / L) tan(delta) dt.
VehicleState step(const VehicleState& state, double steering, double dt);

/// Vehicle on the centerline at arc `s`, aligned with the track.
VehicleState state_on_track(const Track& track, double s, double lateral_offset = 0.0,
                            double speed = kDefaultSpeed);

}  // namespace lanewatch::sim
