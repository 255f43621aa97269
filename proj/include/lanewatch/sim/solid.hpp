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

#include "lanewatch/nnet/regressor.hpp"
#include "lanewatch/sim/episode.hpp"

namespace lanewatch::sim {

/// Admission filter: true iff a nominal closed-loop run completes `laps`
/// laps with no off-track frame. laps < 2 is a precondition error.
bool is_solid(const Controller& controller, const Track& track, int laps, double dt = 0.05);

/// Deterministic (dropout off) network as the controller.
bool is_solid(const nnet::Regressor& model, const Track& track, int laps, double dt = 0.05);

/// Steps needed to cover `laps` laps at the default speed.
std::size_t lap_steps(const Track& track, double laps, double dt);

}  // namespace lanewatch::sim
