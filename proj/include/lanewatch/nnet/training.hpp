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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanewatch/nnet/regressor.hpp"

namespace lanewatch::nnet {

enum class Provenance { kNominal, kMutatedLabels, kObservations };

std::string to_string(Provenance p);

/// Supervised samples. Observation features are mirror-odd: flipping the
/// road left/right negates every feature and every target.
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;
  Provenance provenance = Provenance::kNominal;

  std::size_t size() const { return inputs.size(); }
  bool empty() const { return inputs.empty(); }

  /// Checks equal lengths and consistent widths; when `target_bound` is set,
  /// every target must lie within +-bound.
  void validate(std::optional<double> target_bound = std::nullopt) const;
};

struct TrainingConfig {
  int epochs = 50;
  int batch_size = 128;
  double learning_rate = 1e-4;
  int patience = 10;
  double min_delta = 5e-4;
  double validation_fraction = 0.2;
  double augmentation_fraction = 0.6;
  double jitter_std = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TrainingResult {
  Regressor model;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_validation_loss = 0.0;
  bool stopped_early = false;
};

/// Mini-batch Adam on mean squared error with early stopping. Returns the
/// parameters of the epoch with the lowest validation loss.
TrainingResult train(Regressor model, const Dataset& data, const TrainingConfig& cfg);

/// Mean squared error of the deterministic network over a dataset.
double evaluate_mse(const Regressor& model, const Dataset& data);

struct LossGradient {
  double loss = 0.0;
  /// Same layout as Regressor::parameters().
  std::vector<double> gradient;
};

/// Per-sample MSE and its analytic gradient with dropout disabled.
LossGradient loss_gradient(const Regressor& model, std::span<const double> input,
                           std::span<const double> target);

}  // namespace lanewatch::nnet
