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

#include "lanewatch/sim/track.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::sim {

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

Track::Track(std::string id, std::vector<Vec2> centerline, double lane_half_width)
    : id_(std::move(id)), points_(std::move(centerline)), half_width_(lane_half_width) {
  require(half_width_ > 0.0, ErrorKind::kConfig, "lane half-width must be positive");
  if (points_.size() >= 2) {
    const Vec2 a = points_.front();
    const Vec2 b = points_.back();
    if (std::hypot(a.x - b.x, a.y - b.y) < 1e-6) points_.pop_back();
  }
  require(points_.size() >= 3, ErrorKind::kConfig, "a closed track needs at least three waypoints");
  cumulative_.assign(points_.size() + 1, 0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 b = points_[(i + 1) % points_.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    require(len > 0.0 && len <= kMaxWaypointSpacing, ErrorKind::kConfig,
            "waypoint spacing out of bounds at index " + std::to_string(i));
    cumulative_[i + 1] = cumulative_[i] + len;
  }
}

Projection Track::project(Vec2 p) const {
  const std::size_t n = points_.size();
  double best = HUGE_VAL;
  std::size_t best_i = 0;
  double best_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = points_[i];
    const Vec2 b = points_[(i + 1) % n];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = a.x + t * dx - p.x;
    const double qy = a.y + t * dy - p.y;
    const double d2 = qx * qx + qy * qy;
    if (d2 < best) {
      best = d2;
      best_i = i;
      best_t = t;
    }
  }
  const Vec2 a = points_[best_i];
  const Vec2 b = points_[(best_i + 1) % n];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  const double qx = a.x + best_t * dx;
  const double qy = a.y + best_t * dy;
  Projection out;
  out.arc = cumulative_[best_i] + best_t * len;
  if (out.arc >= length()) out.arc -= length();
  out.lateral = (dx * (p.y - qy) - dy * (p.x - qx)) / len;
  out.heading = heading_at(out.arc);
  return out;
}

Vec2 Track::point_at(double s) const {
  const double total = length();
  s = std::fmod(s, total);
  if (s < 0.0) s += total;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1;
  i = std::min(i, points_.size() - 1);
  const Vec2 a = points_[i];
  const Vec2 b = points_[(i + 1) % points_.size()];
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double t = (s - cumulative_[i]) / seg;
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

double Track::heading_at(double s) const {
  const Vec2 ahead = point_at(s + 0.5);
  const Vec2 behind = point_at(s - 0.5);
  return std::atan2(ahead.y - behind.y, ahead.x - behind.x);
}

Track Track::mirrored() const {
  std::vector<Vec2> pts = points_;
  for (auto& p : pts) p.y = -p.y;
  return Track(id_ + "-mirrored", std::move(pts), half_width_);
}

Track make_circle_track(double radius, double spacing, double lane_half_width) {
  require(radius > 0.0 && spacing > 0.0, ErrorKind::kConfig, "circle radius and spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * radius / spacing));
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return Track("circle-r" + format_short(radius), std::move(pts), lane_half_width);
}

Track make_oval_track(double straight_length, double radius, double spacing, double lane_half_width) {
  require(straight_length > 0.0 && radius > 0.0 && spacing > 0.0, ErrorKind::kConfig,
          "oval dimensions must be positive");
  std::vector<Vec2> pts;
  const auto n_straight = static_cast<std::size_t>(std::ceil(straight_length / spacing));
  const auto n_arc = static_cast<std::size_t>(std::ceil(std::numbers::pi * radius / spacing));
  const double half = straight_length / 2.0;
  // Lower straight, left to right.
  for (std::size_t i = 0; i < n_straight; ++i) {
    pts.push_back({-half + straight_length * static_cast<double>(i) / static_cast<double>(n_straight), -radius});
  }
  // Right semicircle, counter-clockwise.
  for (std::size_t i = 0; i < n_arc; ++i) {
    const double a = -std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_arc);
    pts.push_back({half + radius * std::cos(a), radius * std::sin(a)});
  }
  // Upper straight, right to left.
  for (std::size_t i = 0; i < n_straight; ++i) {
    pts.push_back({half - straight_length * static_cast<double>(i) / static_cast<double>(n_straight), radius});
  }
  for (std::size_t i = 0; i < n_arc; ++i) {
    const double a = std::numbers::pi / 2 + std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_arc);
    pts.push_back({-half + radius * std::cos(a), radius * std::sin(a)});
  }
  return Track("oval", std::move(pts), lane_half_width);
}

Track make_default_track(double lane_half_width) {
  constexpr double kBaseRadius = 70.0;
  constexpr std::size_t kSamples = 4000;
  std::vector<Vec2> dense;
  dense.reserve(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / kSamples;
    const double r = kBaseRadius * (1.0 + 0.22 * std::sin(2.0 * phi) + 0.12 * std::cos(3.0 * phi));
    dense.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  // Resample to roughly 1 m spacing.
  std::vector<Vec2> pts{dense.front()};
  double acc = 0.0;
  for (std::size_t i = 1; i <= dense.size(); ++i) {
    const Vec2 a = dense[i - 1];
    const Vec2 b = dense[i % dense.size()];
    acc += std::hypot(b.x - a.x, b.y - a.y);
    if (acc >= 1.0 && i < dense.size()) {
      pts.push_back(b);
      acc = 0.0;
    }
  }
  return Track("default-loop", std::move(pts), lane_half_width);
}

std::string serialize_track(const Track& track) {
  std::string out = "lanewatch-track 1\n";
  out += "id " + track.id() + "\n";
  out += "lane_half_width " + format_double(track.lane_half_width()) + "\n";
  out += "waypoints " + std::to_string(track.centerline().size()) + "\n";
  for (const auto& p : track.centerline()) out += format_double(p.x) + " " + format_double(p.y) + "\n";
  return out;
}

Track parse_track(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic, key, id;
  int version = 0;
  double half_width = 0.0;
  std::size_t n = 0;
  std::string hw_text;
  if (!(in >> magic >> version) || magic != "lanewatch-track" || version != 1) {
    fail(ErrorKind::kParse, "not a version-1 track file");
  }
  if (!(in >> key >> id) || key != "id") fail(ErrorKind::kParse, "track file: missing id");
  if (!(in >> key >> hw_text) || key != "lane_half_width") fail(ErrorKind::kParse, "track file: missing lane_half_width");
  half_width = parse_double(hw_text);
  if (!(in >> key >> n) || key != "waypoints") fail(ErrorKind::kParse, "track file: missing waypoint count");
  std::vector<Vec2> pts(n);
  for (auto& p : pts) {
    std::string xs, ys;
    if (!(in >> xs >> ys)) fail(ErrorKind::kParse, "track file: truncated waypoint list");
    p = {parse_double(xs), parse_double(ys)};
  }
  return Track(id, std::move(pts), half_width);
}

void save_track(const Track& track, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_track(track));
}

Track load_track(const std::filesystem::path& path) { return parse_track(read_file(path)); }

}  // namespace lanewatch::sim
