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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lanewatch::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Closest centerline point to a query position.
struct Projection {
  double arc = 0.0;      // arc length of the closest point, in [0, length)
  double lateral = 0.0;  // signed offset, positive to the left of travel
  double heading = 0.0;  // centerline tangent heading at the closest point
};

/// Closed-loop centerline with a constant lane half-width.
class Track {
 public:
  static constexpr double kMaxWaypointSpacing = 5.0;

  /// A trailing waypoint equal to the first (within 1e-6 m) is dropped.
  Track(std::string id, std::vector<Vec2> centerline, double lane_half_width = 2.0);

  const std::string& id() const { return id_; }
  const std::vector<Vec2>& centerline() const { return points_; }
  double lane_half_width() const { return half_width_; }
  double length() const { return cumulative_.back(); }

  Projection project(Vec2 p) const;

  /// Centerline point at arc length `s` (wrapped onto the loop).
  Vec2 point_at(double s) const;

  /// Tangent heading at `s`, from a 1 m centred chord.
  double heading_at(double s) const;

  /// Reflection y -> -y.
  Track mirrored() const;

 private:
  std::string id_;
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;  // size points_.size() + 1
  double half_width_;
};

/// Counter-clockwise circle centred at the origin, starting at (radius, 0).
Track make_circle_track(double radius, double spacing = 1.0, double lane_half_width = 2.0);

/// Stadium: two straights joined by semicircles. Starts at the beginning of
/// the lower straight, heading +x.
Track make_oval_track(double straight_length, double radius, double spacing = 1.0,
                      double lane_half_width = 2.0);

/// Default study loop with left and right bends (about 470 m).
Track make_default_track(double lane_half_width = 2.0);

// Track files: "lanewatch-track 1", then "id <id>", "lane_half_width <m>",
// "waypoints <n>", and n lines of "x y".
std::string serialize_track(const Track& track);
Track parse_track(std::string_view text);
void save_track(const Track& track, const std::filesystem::path& path);
Track load_track(const std::filesystem::path& path);

double wrap_angle(double a);

}  // namespace lanewatch::sim
