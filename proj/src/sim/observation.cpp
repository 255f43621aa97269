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

#include "lanewatch/sim/observation.hpp"

#include <cmath>
#include <numeric>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::sim {

std::string to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kAdditiveNoise: return "additive-noise";
    case CorruptionKind::kContrastFade: return "contrast-fade";
    case CorruptionKind::kChannelOcclusion: return "channel-occlusion";
    case CorruptionKind::kBiasShift: return "bias-shift";
  }
  return "unknown";
}

std::string to_string(Tier tier) {
  switch (tier) {
    case Tier::kNominal: return "nominal";
    case Tier::kModerate: return "moderate";
    case Tier::kExtreme: return "extreme";
  }
  return "unknown";
}

CorruptionKind parse_corruption_kind(std::string_view text) {
  for (auto k : {CorruptionKind::kAdditiveNoise, CorruptionKind::kContrastFade,
                 CorruptionKind::kChannelOcclusion, CorruptionKind::kBiasShift}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::kParse, "unknown corruption kind '" + std::string(text) + "'");
}

Tier parse_tier(std::string_view text) {
  for (auto t : {Tier::kNominal, Tier::kModerate, Tier::kExtreme}) {
    if (to_string(t) == text) return t;
  }
  fail(ErrorKind::kParse, "unknown perturbation tier '" + std::string(text) + "'");
}

void PerturbationSpec::validate() const {
  if (tier == Tier::kNominal) {
    require(corruptions.empty(), ErrorKind::kConfig, "nominal tier cannot carry corruptions");
  }
  for (const auto& c : corruptions) {
    require(c.intensity >= 0.0 && std::isfinite(c.intensity), ErrorKind::kConfig,
            "corruption intensity must be a non-negative number");
    if (c.kind == CorruptionKind::kContrastFade || c.kind == CorruptionKind::kChannelOcclusion) {
      require(c.intensity <= 1.0, ErrorKind::kConfig, to_string(c.kind) + " intensity must not exceed 1");
    }
  }
}

std::vector<double> clean_features(const VehicleState& state, const Track& track,
                                   const ObservationConfig& cfg) {
  const Projection proj = track.project(state.position);
  const double lost_at = kLostLaneWidths * 2.0 * track.lane_half_width();
  if (std::abs(proj.lateral) > lost_at) {
    fail(ErrorKind::kLost, "vehicle is " + format_short(std::abs(proj.lateral)) +
                               " m from the centerline of " + track.id());
  }
  const double c = std::cos(state.heading);
  const double s = std::sin(state.heading);
  std::vector<double> out;
  out.reserve(cfg.dim());
  for (double d : cfg.lookahead_distances) {
    const Vec2 p = track.point_at(proj.arc + d);
    const double dx = p.x - state.position.x;
    const double dy = p.y - state.position.y;
    out.push_back((-s * dx + c * dy) / track.lane_half_width());
  }
  out.push_back(wrap_angle(proj.heading - state.heading));
  return out;
}

void apply_perturbation(std::vector<double>& features, const PerturbationSpec& spec,
                        std::size_t lookahead_count, Rng& rng) {
  for (const auto& c : spec.corruptions) {
    switch (c.kind) {
      case CorruptionKind::kAdditiveNoise:
        for (double& f : features) f += c.intensity * rng.normal();
        break;
      case CorruptionKind::kContrastFade:
        for (double& f : features) f *= (1.0 - c.intensity);
        break;
      case CorruptionKind::kChannelOcclusion: {
        const auto k = std::min(lookahead_count,
                                static_cast<std::size_t>(std::ceil(c.intensity * static_cast<double>(lookahead_count))));
        std::vector<std::size_t> idx(lookahead_count);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(rng.index(lookahead_count - i));
          std::swap(idx[i], idx[j]);
          features[idx[i]] = 0.0;
        }
        break;
      }
      case CorruptionKind::kBiasShift:
        for (double& f : features) f += c.intensity;
        break;
    }
  }
}

std::vector<double> observe(const VehicleState& state, const Track& track,
                            const PerturbationSpec& spec, Rng& rng, const ObservationConfig& cfg) {
  auto features = clean_features(state, track, cfg);
  apply_perturbation(features, spec, cfg.lookahead_count(), rng);
  return features;
}

}  // namespace lanewatch::sim
