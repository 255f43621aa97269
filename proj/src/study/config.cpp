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

#include "lanewatch/study/config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/nnet/regressor.hpp"

namespace lanewatch::study {

using nlohmann::json;

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMcd: return "mcd";
    case EstimatorKind::kDe: return "de";
    case EstimatorKind::kAe: return "ae";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  for (auto k : {EstimatorKind::kMcd, EstimatorKind::kDe, EstimatorKind::kAe}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::kConfig, "unknown estimator kind '" + std::string(text) + "'");
}

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  require(j.is_object(), ErrorKind::kConfig, std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(ErrorKind::kConfig, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

nnet::TrainingConfig parse_training(const json& j, nnet::TrainingConfig cfg) {
  reject_unknown(j, {"epochs", "batch_size", "learning_rate", "patience", "min_delta", "validation_fraction",
                     "augmentation_fraction", "jitter_std"},
                 "training");
  read(j, "epochs", cfg.epochs);
  read(j, "batch_size", cfg.batch_size);
  read(j, "learning_rate", cfg.learning_rate);
  read(j, "patience", cfg.patience);
  read(j, "min_delta", cfg.min_delta);
  read(j, "validation_fraction", cfg.validation_fraction);
  read(j, "augmentation_fraction", cfg.augmentation_fraction);
  read(j, "jitter_std", cfg.jitter_std);
  return cfg;
}

std::vector<sim::Corruption> parse_corruptions(const json& j) {
  std::vector<sim::Corruption> out;
  for (const auto& c : j) {
    reject_unknown(c, {"kind", "intensity"}, "corruption");
    out.push_back({sim::parse_corruption_kind(c.at("kind").get<std::string>()), c.at("intensity").get<double>()});
  }
  return out;
}

BenchmarkRecipe parse_benchmark(const json& j) {
  reject_unknown(j, {"id", "tier", "corruptions", "mutation"}, "benchmark");
  BenchmarkRecipe b;
  b.id = j.at("id").get<std::string>();
  if (j.contains("tier")) b.tier = sim::parse_tier(j.at("tier").get<std::string>());
  if (j.contains("corruptions")) b.corruptions = parse_corruptions(j.at("corruptions"));
  if (j.contains("mutation")) {
    const auto& m = j.at("mutation");
    reject_unknown(m, {"kind", "magnitude", "label_fraction"}, "mutation");
    sim::MutationOp op;
    op.kind = sim::parse_mutation_kind(m.at("kind").get<std::string>());
    op.magnitude = m.at("magnitude").get<double>();
    read(m, "label_fraction", op.label_fraction);
    b.mutation = op;
  }
  return b;
}

EstimatorSpec parse_estimator(const json& j) {
  reject_unknown(j, {"id", "kind", "dropout_rate", "samples", "members", "gamma"}, "estimator");
  EstimatorSpec e;
  e.id = j.at("id").get<std::string>();
  e.kind = parse_estimator_kind(j.at("kind").get<std::string>());
  read(j, "dropout_rate", e.dropout_rate);
  read(j, "samples", e.samples);
  read(j, "members", e.members);
  read(j, "gamma", e.gamma);
  return e;
}

bool contains_rate(const std::vector<double>& rates, double r) {
  return std::any_of(rates.begin(), rates.end(), [r](double x) { return std::abs(x - r) <= 1e-12; });
}

}  // namespace

void StudyConfig::validate() const {
  require(dt > 0.0, ErrorKind::kConfig, "dt must be positive");
  require(track == "default" || track == "oval" || track == "circle", ErrorKind::kConfig,
          "track must be one of default, oval, circle");
  require(solid_laps >= 2, ErrorKind::kConfig, "solid_laps must be at least 2");
  training.validate();
  autoencoder_training.validate();
  require(architecture.size() >= 2 && architecture.front() == sim::ObservationConfig{}.dim() &&
              architecture.back() == 1,
          ErrorKind::kConfig, "architecture must map the 9 observation features to one steering output");
  require(autoencoder_dims.size() >= 2 && autoencoder_dims.front() == architecture.front() &&
              autoencoder_dims.back() == architecture.front(),
          ErrorKind::kConfig, "autoencoder must reconstruct the observation");
  require(!dropout_rates.empty(), ErrorKind::kConfig, "dropout_rates grid is empty");
  for (double r : dropout_rates) nnet::validate_dropout_rate(r);
  nnet::validate_dropout_rate(member_dropout_rate);
  require(contains_rate(dropout_rates, driver_dropout_rate), ErrorKind::kConfig,
          "driver_dropout_rate must be one of the trained dropout rates");
  require(!member_seeds.empty(), ErrorKind::kConfig, "member_seeds grid is empty");
  require(std::set<std::uint64_t>(member_seeds.begin(), member_seeds.end()).size() == member_seeds.size(),
          ErrorKind::kConfig, "member_seeds must be distinct");
  require(!episode_seeds.empty(), ErrorKind::kConfig, "episode_seeds grid is empty");
  require(episode_steps > 0 && calibration_steps > 0, ErrorKind::kConfig, "episode lengths must be positive");
  eval.validate();
  require(!eval.confidences.empty(), ErrorKind::kConfig, "confidence grid is empty");

  require(!estimators.empty(), ErrorKind::kConfig, "no estimators configured");
  std::set<std::string> ids;
  for (const auto& e : estimators) {
    require(!e.id.empty() && ids.insert(e.id).second, ErrorKind::kConfig, "estimator ids must be unique and non-empty");
    require(e.gamma > 0.0 && e.gamma < 1.0, ErrorKind::kConfig, "estimator gamma must lie in (0, 1)");
    if (e.kind == EstimatorKind::kMcd) {
      require(contains_rate(dropout_rates, e.dropout_rate), ErrorKind::kConfig,
              "estimator " + e.id + " uses dropout rate " + format_short(e.dropout_rate) +
                  " which is not in the training grid");
    }
    if (e.kind == EstimatorKind::kMcd) {
      require(e.samples >= 2, ErrorKind::kConfig, "estimator " + e.id + " needs at least 2 samples");
    }
    if (e.kind == EstimatorKind::kDe) {
      require(e.members >= 2 && static_cast<std::size_t>(e.members) <= member_seeds.size(), ErrorKind::kConfig,
              "estimator " + e.id + " needs between 2 and " + std::to_string(member_seeds.size()) + " members");
    }
  }

  require(!benchmarks.empty(), ErrorKind::kConfig, "no benchmarks configured");
  std::set<std::string> bids;
  for (const auto& b : benchmarks) {
    require(!b.id.empty() && bids.insert(b.id).second, ErrorKind::kConfig, "benchmark ids must be unique and non-empty");
    require(b.id != "nominal" && b.id != "all", ErrorKind::kConfig, "benchmark id '" + b.id + "' is reserved");
    sim::PerturbationSpec{b.tier, b.corruptions, 0}.validate();
    if (b.mutation) {
      b.mutation->validate();
    } else {
      require(b.tier != sim::Tier::kNominal, ErrorKind::kConfig,
              "benchmark " + b.id + " is neither perturbed nor mutated");
    }
  }

  const std::set<std::string> dirs{paths.models, paths.traces, paths.calibration, paths.reports, paths.bench};
  require(dirs.size() == 5, ErrorKind::kConfig, "output paths must be distinct");

  require(!bench.ensemble_sizes.empty() && !bench.mcd_samples.empty(), ErrorKind::kConfig, "bench grids are empty");
  for (auto n : bench.ensemble_sizes) require(n >= 2, ErrorKind::kConfig, "bench ensemble sizes must be >= 2");
  for (auto s : bench.mcd_samples) require(s >= 1, ErrorKind::kConfig, "bench sample counts must be >= 1");
  require(bench.repetitions >= 1, ErrorKind::kConfig, "bench repetitions must be >= 1");
  require(bench.inputs >= bench.warmup + 100, ErrorKind::kConfig, "bench needs at least 100 inputs after warmup");
}

const EstimatorSpec& StudyConfig::estimator(std::string_view id) const {
  for (const auto& e : estimators) {
    if (e.id == id) return e;
  }
  fail(ErrorKind::kConfig, "no estimator '" + std::string(id) + "' in the study config");
}

const BenchmarkRecipe& StudyConfig::benchmark(std::string_view id) const {
  for (const auto& b : benchmarks) {
    if (b.id == id) return b;
  }
  fail(ErrorKind::kConfig, "no benchmark '" + std::string(id) + "' in the study config");
}

StudyConfig parse_study_config(std::string_view text) {
  StudyConfig cfg;
  try {
    const json j = json::parse(text);
    reject_unknown(j, {"seed", "track", "dt", "paths", "demonstrations", "training", "autoencoder_training",
                       "architecture", "autoencoder_dims", "solid_laps", "dropout_rates", "driver_dropout_rate", "mcd_seed",
                       "member_seeds", "member_dropout_rate", "estimators", "benchmarks", "episode_seeds",
                       "episode_steps", "calibration_steps", "evaluation", "bench"},
                   "study config");
    read(j, "seed", cfg.seed);
    read(j, "track", cfg.track);
    read(j, "dt", cfg.dt);
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      reject_unknown(p, {"models", "traces", "calibration", "reports", "bench"}, "paths");
      read(p, "models", cfg.paths.models);
      read(p, "traces", cfg.paths.traces);
      read(p, "calibration", cfg.paths.calibration);
      read(p, "reports", cfg.paths.reports);
      read(p, "bench", cfg.paths.bench);
    }
    if (j.contains("demonstrations")) {
      const auto& d = j.at("demonstrations");
      reject_unknown(d, {"frames", "episode_frames", "start_offset", "weave_std", "weave_corr"}, "demonstrations");
      read(d, "frames", cfg.demonstrations.frames);
      read(d, "episode_frames", cfg.demonstrations.episode_frames);
      read(d, "start_offset", cfg.demonstrations.start_offset);
      read(d, "weave_std", cfg.demonstrations.weave_std);
      read(d, "weave_corr", cfg.demonstrations.weave_corr);
    }
    if (j.contains("training")) cfg.training = parse_training(j.at("training"), cfg.training);
    cfg.autoencoder_training = cfg.training;
    if (j.contains("autoencoder_training")) {
      cfg.autoencoder_training = parse_training(j.at("autoencoder_training"), cfg.autoencoder_training);
    }
    read(j, "architecture", cfg.architecture);
    read(j, "autoencoder_dims", cfg.autoencoder_dims);
    read(j, "solid_laps", cfg.solid_laps);
    read(j, "dropout_rates", cfg.dropout_rates);
    read(j, "driver_dropout_rate", cfg.driver_dropout_rate);
    read(j, "mcd_seed", cfg.mcd_seed);
    read(j, "member_seeds", cfg.member_seeds);
    read(j, "member_dropout_rate", cfg.member_dropout_rate);
    if (j.contains("estimators")) {
      for (const auto& e : j.at("estimators")) cfg.estimators.push_back(parse_estimator(e));
    }
    if (j.contains("benchmarks")) {
      for (const auto& b : j.at("benchmarks")) cfg.benchmarks.push_back(parse_benchmark(b));
    }
    read(j, "episode_seeds", cfg.episode_seeds);
    read(j, "episode_steps", cfg.episode_steps);
    read(j, "calibration_steps", cfg.calibration_steps);
    if (j.contains("evaluation")) {
      const auto& e = j.at("evaluation");
      reject_unknown(e, {"ttf", "beta", "confidences", "window_seconds"}, "evaluation");
      read(e, "ttf", cfg.eval.ttf_list);
      read(e, "beta", cfg.eval.beta);
      read(e, "confidences", cfg.eval.confidences);
      read(e, "window_seconds", cfg.eval.window_seconds);
    }
    if (j.contains("bench")) {
      const auto& b = j.at("bench");
      reject_unknown(b, {"ensemble_sizes", "mcd_samples", "inputs", "warmup", "repetitions"}, "bench");
      read(b, "ensemble_sizes", cfg.bench.ensemble_sizes);
      read(b, "mcd_samples", cfg.bench.mcd_samples);
      read(b, "inputs", cfg.bench.inputs);
      read(b, "warmup", cfg.bench.warmup);
      read(b, "repetitions", cfg.bench.repetitions);
    }
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("study config: ") + e.what());
  } catch (const json::exception& e) {
    fail(ErrorKind::kConfig, std::string("study config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  return parse_study_config(read_file(path));
}

}  // namespace lanewatch::study
