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

#include "lanewatch/nnet/training.hpp"

namespace lanewatch::sim {

enum class MutationKind { kWeightFuzz, kLabelNoiseRetrain, kUnderTraining };

std::string to_string(MutationKind kind);
MutationKind parse_mutation_kind(std::string_view text);

// Magnitude bounds.
inline constexpr double kMaxFuzzStd = 2.0;        // weight units
inline constexpr double kMaxLabelNoiseStd = 1.0;  // rad
inline constexpr int kMinUnderTrainingEpochs = 1;
inline constexpr int kMaxUnderTrainingEpochs = 49;

struct MutationOp {
  MutationKind kind = MutationKind::kWeightFuzz;
  /// Fuzz: std of the weight noise. Label noise: std in radians.
  /// Under-training: epoch count (integral).
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  /// Share of targets corrupted by label-noise-retrain.
  double label_fraction = 0.3;

  void validate() const;
};

/// Adds N(0, magnitude^2) to every weight (biases untouched).
nnet::Regressor fuzz_weights(const nnet::Regressor& model, const MutationOp& op);

/// Copy of `data` with N(0, magnitude^2) added to `label_fraction` of the targets.
nnet::Dataset noisy_labels(const nnet::Dataset& data, const MutationOp& op);

/// Applies `op` to the system under test. Retraining ops start from a fresh
/// network with the model's architecture, dropout rate and seed, trained on
/// `data` with `cfg` and batches shuffled by op.seed.
nnet::Regressor mutate(const nnet::Regressor& model, const nnet::Dataset& data,
                       const nnet::TrainingConfig& cfg, const MutationOp& op);

}  // namespace lanewatch::sim
