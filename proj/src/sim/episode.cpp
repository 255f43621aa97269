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

#include "lanewatch/sim/episode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/sim/expert.hpp"

namespace lanewatch::sim {

Controller expert_controller() {
  return [](const ControlContext& ctx) { return expert_steer(ctx.state, ctx.track); };
}

Controller model_controller(nnet::Regressor model) {
  return [m = std::move(model)](const ControlContext& ctx) { return m.forward(ctx.observation).front(); };
}

Controller ensemble_controller(uq::Ensemble ensemble) {
  return [e = std::move(ensemble)](const ControlContext& ctx) {
    return uq::de_estimate(e, ctx.observation).mean;
  };
}

Estimator mcd_estimator(nnet::Regressor model, uq::McdConfig cfg) {
  cfg.validate();
  return [m = std::move(model), cfg](std::span<const double> obs, Rng& rng) {
    return uq::mcd_estimate(m, obs, cfg, rng).variance;
  };
}

Estimator de_estimator(uq::Ensemble ensemble) {
  return [e = std::move(ensemble)](std::span<const double> obs, Rng&) {
    return uq::de_estimate(e, obs).variance;
  };
}

Estimator ae_estimator(uq::AutoencoderScorer scorer) {
  return [s = std::move(scorer)](std::span<const double> obs, Rng&) { return uq::ae_score(s, obs); };
}

std::vector<std::size_t> SimTrace::failure_onsets() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].off_track && (i == 0 || !records[i - 1].off_track)) out.push_back(i);
  }
  return out;
}

std::size_t SimTrace::off_track_frames() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const TraceRecord& r) { return r.off_track; }));
}

std::vector<double> SimTrace::scores() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.score);
  return out;
}

SimTrace run_episode(const Controller& controller, const Track& track,
                     const PerturbationSpec& spec, const Estimator* estimator,
                     const EpisodeConfig& cfg) {
  require(cfg.dt > 0.0, ErrorKind::kPrecondition, "episode dt must be positive");
  spec.validate();
  SimTrace trace;
  trace.meta.dt = cfg.dt;
  trace.meta.track_id = track.id();
  trace.meta.perturbation = spec;
  trace.meta.model_id = cfg.model_id;
  trace.meta.estimator_id = cfg.estimator_id;
  trace.meta.benchmark = cfg.benchmark;
  trace.meta.mutant = cfg.mutant;
  trace.records.reserve(cfg.max_steps);

  const ObservationConfig obs_cfg;
  Rng perturb_rng(spec.seed);
  Rng score_rng(cfg.seed);
  const double lost_at = kLostLaneWidths * 2.0 * track.lane_half_width();
  VehicleState state = state_on_track(track, cfg.start_arc, cfg.start_offset, cfg.speed);

  for (std::size_t i = 0; i < cfg.max_steps; ++i) {
    const Projection proj = track.project(state.position);
    if (std::abs(proj.lateral) > lost_at) {
      trace.meta.termination = "lost at frame " + std::to_string(i) + " (offset " +
                               format_short(proj.lateral) + " m)";
      break;
    }
    TraceRecord rec;
    rec.t = static_cast<double>(i) * cfg.dt;
    rec.observation = observe(state, track, spec, perturb_rng, obs_cfg);
    rec.score = estimator ? (*estimator)(rec.observation, score_rng) : 0.0;
    rec.off_track = std::abs(proj.lateral) > track.lane_half_width();
    const double command = controller(ControlContext{rec.observation, state, track});
    rec.steering = std::isfinite(command) ? std::clamp(command, -kMaxSteering, kMaxSteering) : 0.0;
    trace.records.push_back(std::move(rec));

    if (trace.records.back().off_track) {
      state = state_on_track(track, proj.arc, 0.0, cfg.speed);
    } else {
      state = step(state, trace.records.back().steering, cfg.dt);
    }
  }
  return trace;
}

double frame_rate(std::span<const double> t) {
  require(t.size() >= 2, ErrorKind::kInsufficientData, "frame rate needs at least two records");
  const double span = t.back() - t.front();
  require(span > 0.0, ErrorKind::kInput, "trace timestamps do not advance");
  return static_cast<double>(t.size() - 1) / span;
}

double frame_rate(const SimTrace& trace) {
  std::vector<double> t;
  t.reserve(trace.records.size());
  for (const auto& r : trace.records) t.push_back(r.t);
  return frame_rate(t);
}

std::size_t window_len_frames(double fps, double seconds) {
  require(fps > 0.0 && seconds > 0.0, ErrorKind::kConfig, "frame rate and window length must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fps * seconds)));
}

namespace {

nlohmann::ordered_json meta_to_json(const TraceMeta& m, std::size_t frames) {
  nlohmann::ordered_json j;
  j["format"] = "lanewatch-trace";
  j["version"] = 1;
  j["dt"] = m.dt;
  j["track"] = m.track_id;
  j["model"] = m.model_id;
  j["estimator"] = m.estimator_id;
  j["benchmark"] = m.benchmark;
  j["mutant"] = m.mutant;
  j["tier"] = to_string(m.perturbation.tier);
  j["corruptions"] = nlohmann::ordered_json::array();
  for (const auto& c : m.perturbation.corruptions) {
    nlohmann::ordered_json cj;
    cj["kind"] = to_string(c.kind);
    cj["intensity"] = c.intensity;
    j["corruptions"].push_back(cj);
  }
  j["perturbation_seed"] = m.perturbation.seed;
  j["termination"] = m.termination;
  j["frames"] = frames;
  return j;
}

}  // namespace

std::string serialize_trace(const SimTrace& trace) {
  std::string out = meta_to_json(trace.meta, trace.records.size()).dump() + "\n";
  for (const auto& r : trace.records) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["obs"] = r.observation;
    j["steer"] = r.steering;
    j["score"] = r.score;
    j["off_track"] = r.off_track;
    out += j.dump();
    out += '\n';
  }
  return out;
}

SimTrace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  SimTrace trace;
  try {
    if (!std::getline(in, line)) fail(ErrorKind::kParse, "empty trace file");
    const auto h = nlohmann::json::parse(line);
    if (h.value("format", "") != "lanewatch-trace" || h.value("version", 0) != 1) {
      fail(ErrorKind::kParse, "not a version-1 trace file");
    }
    auto& m = trace.meta;
    m.dt = h.at("dt").get<double>();
    m.track_id = h.at("track").get<std::string>();
    m.model_id = h.at("model").get<std::string>();
    m.estimator_id = h.at("estimator").get<std::string>();
    m.benchmark = h.at("benchmark").get<std::string>();
    m.mutant = h.at("mutant").get<bool>();
    m.perturbation.tier = parse_tier(h.at("tier").get<std::string>());
    for (const auto& c : h.at("corruptions")) {
      m.perturbation.corruptions.push_back(
          {parse_corruption_kind(c.at("kind").get<std::string>()), c.at("intensity").get<double>()});
    }
    m.perturbation.seed = h.at("perturbation_seed").get<std::uint64_t>();
    m.termination = h.at("termination").get<std::string>();
    const auto frames = h.at("frames").get<std::size_t>();
    trace.records.reserve(frames);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      TraceRecord r;
      r.t = j.at("t").get<double>();
      r.observation = j.at("obs").get<std::vector<double>>();
      r.steering = j.at("steer").get<double>();
      r.score = j.at("score").get<double>();
      r.off_track = j.at("off_track").get<bool>();
      trace.records.push_back(std::move(r));
    }
    if (trace.records.size() != frames) {
      fail(ErrorKind::kParse, "trace declares " + std::to_string(frames) + " frames but holds " +
                                  std::to_string(trace.records.size()));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("trace file: ") + e.what());
  }
  return trace;
}

void save_trace(const SimTrace& trace, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_trace(trace));
}

SimTrace load_trace(const std::filesystem::path& path) { return parse_trace(read_file(path)); }

}  // namespace lanewatch::sim
