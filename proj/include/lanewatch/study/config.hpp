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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/eval/metrics.hpp"
#include "lanewatch/nnet/training.hpp"
#include "lanewatch/sim/expert.hpp"
#include "lanewatch/sim/mutation.hpp"
#include "lanewatch/sim/observation.hpp"

namespace lanewatch::study {

enum class EstimatorKind { kMcd, kDe, kAe };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view text);

struct EstimatorSpec {
  std::string id;
  EstimatorKind kind = EstimatorKind::kDe;
  /// MCD: dropout rate of the controller it samples.
  double dropout_rate = 0.05;
  int samples = 32;     // MCD
  int members = 5;      // DE
  double gamma = 0.999; // confidence shown in the summary table
};

/// One benchmark: a perturbation tier, or a mutation of the system under test
/// driving in nominal conditions.
struct BenchmarkRecipe {
  std::string id;
  sim::Tier tier = sim::Tier::kNominal;
  std::vector<sim::Corruption> corruptions;
  std::optional<sim::MutationOp> mutation;

  bool is_mutant() const { return mutation.has_value(); }
};

struct BenchGrid {
  std::vector<std::size_t> ensemble_sizes{2, 5, 10, 50};
  std::vector<std::size_t> mcd_samples{2, 32, 128};
  std::size_t inputs = 500;
  std::size_t warmup = 50;
  std::size_t repetitions = 3;
};

/// Output layout below --out.
struct StudyPaths {
  std::string models = "models";
  std::string traces = "traces";
  std::string calibration = "calibration";
  std::string reports = "reports";
  std::string bench = "bench";
};

struct StudyConfig {
  std::uint64_t seed = 2026;
  std::string track = "default";
  double dt = 0.05;
  StudyPaths paths;
  sim::DemonstrationConfig demonstrations;
  nnet::TrainingConfig training;
  nnet::TrainingConfig autoencoder_training;
  std::vector<std::size_t> architecture{9, 32, 16, 1};
  std::vector<std::size_t> autoencoder_dims{9, 4, 2, 4, 9};
  int solid_laps = 2;
  std::vector<double> dropout_rates{0.05};
  /// The controller of this rate (dropout off) drives every episode; the
  /// estimators only watch.
  double driver_dropout_rate = 0.05;
  std::uint64_t mcd_seed = 1;
  std::vector<std::uint64_t> member_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double member_dropout_rate = 0.0;
  std::vector<EstimatorSpec> estimators;
  std::vector<BenchmarkRecipe> benchmarks;
  std::vector<std::uint64_t> episode_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t episode_steps = 2000;
  std::size_t calibration_steps = 6000;
  eval::EvalConfig eval;
  BenchGrid bench;

  /// Grids non-empty, values within module bounds, estimators consistent
  /// with the training grid, output directories distinct.
  void validate() const;

  const EstimatorSpec& estimator(std::string_view id) const;
  const BenchmarkRecipe& benchmark(std::string_view id) const;
};

StudyConfig parse_study_config(std::string_view text);
StudyConfig load_study_config(const std::filesystem::path& path);

}  // namespace lanewatch::study
