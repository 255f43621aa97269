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

#include <gtest/gtest.h>

#include "lanewatch/common/error.hpp"

#include "lanewatch/nnet/regressor.hpp"
#include "lanewatch/nnet/training.hpp"
#include "lanewatch/sim/expert.hpp"
#include "lanewatch/sim/track.hpp"

// Expects `stmt` to throw lanewatch::Error of category `k`.
#define EXPECT_ERROR_KIND(stmt, k)                                         \
  do {                                                                    \
    try {                                                                 \
      stmt;                                                               \
      ADD_FAILURE() << #stmt " did not throw";                            \
    } catch (const ::lanewatch::Error& e_) {                              \
      EXPECT_EQ(e_.kind(), k) << e_.what();                               \
    }                                                                     \
  } while (false)

namespace lanewatch::testing {

inline const sim::Track& default_track() {
  static const sim::Track track = sim::make_default_track();
  return track;
}

inline const nnet::Dataset& demonstrations() {
  static const nnet::Dataset data = sim::collect_demonstrations(default_track(), sim::DemonstrationConfig{});
  return data;
}

inline nnet::TrainingConfig training_config(std::uint64_t seed) {
  nnet::TrainingConfig cfg;
  cfg.seed = seed;
  return cfg;
}

/// Behavioural-cloning controller with the study defaults, trained once per process.
inline const nnet::Regressor& trained_controller() {
  static const nnet::Regressor model =
      nnet::train(nnet::init_regressor({9, 32, 16, 1}, 0.05, 1), demonstrations(), training_config(1)).model;
  return model;
}

/// Fresh scratch directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lanewatch-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lanewatch::testing
