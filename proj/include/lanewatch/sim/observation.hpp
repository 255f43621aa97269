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
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/common/rng.hpp"
#include "lanewatch/sim/track.hpp"
#include "lanewatch/sim/vehicle.hpp"

namespace lanewatch::sim {

/// Feature layout: lateral position of the centerline at each lookahead arc
/// distance, expressed in the vehicle frame and divided by the lane
/// half-width (positive = left), followed by the heading error
/// wrap(track heading - vehicle heading) in radians.
struct ObservationConfig {
  std::vector<double> lookahead_distances{2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0};

  std::size_t lookahead_count() const { return lookahead_distances.size(); }
  std::size_t dim() const { return lookahead_distances.size() + 1; }
};

enum class CorruptionKind { kAdditiveNoise, kContrastFade, kChannelOcclusion, kBiasShift };
enum class Tier { kNominal, kModerate, kExtreme };

std::string to_string(CorruptionKind kind);
std::string to_string(Tier tier);
CorruptionKind parse_corruption_kind(std::string_view text);
Tier parse_tier(std::string_view text);

struct Corruption {
  CorruptionKind kind = CorruptionKind::kAdditiveNoise;
  double intensity = 0.0;
};

/// Feature-space corruption applied per frame, in list order.
struct PerturbationSpec {
  Tier tier = Tier::kNominal;
  std::vector<Corruption> corruptions;
  std::uint64_t seed = 0;

  /// Nominal tier carries no corruption; intensities are non-negative, and
  /// fade and occlusion intensities are at most 1.
  void validate() const;

  static PerturbationSpec nominal(std::uint64_t seed = 0) { return {Tier::kNominal, {}, seed}; }
};

/// Vehicles farther than this many lane widths from the centerline are lost.
inline constexpr double kLostLaneWidths = 5.0;

std::vector<double> clean_features(const VehicleState& state, const Track& track,
                                   const ObservationConfig& cfg = {});

void apply_perturbation(std::vector<double>& features, const PerturbationSpec& spec,
                        std::size_t lookahead_count, Rng& rng);

std::vector<double> observe(const VehicleState& state, const Track& track,
                            const PerturbationSpec& spec, Rng& rng,
                            const ObservationConfig& cfg = {});

}  // namespace lanewatch::sim
