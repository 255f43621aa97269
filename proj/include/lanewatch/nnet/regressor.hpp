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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lanewatch/common/rng.hpp"

namespace lanewatch::nnet {

/// Fully connected layer. Weights are row-major, `outputs` rows by `inputs`
/// columns.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& weight(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Feed-forward regressor: ReLU hidden layers, identity output, inverted
/// dropout after every hidden activation.
class Regressor {
 public:
  static constexpr double kMaxDropoutRate = 0.40;

  /// Builds a network with scaled-uniform weights in
  /// +-sqrt(6 / (fan_in + fan_out)) and zero biases, drawn from `seed`.
  Regressor(std::vector<std::size_t> layer_dims, double dropout_rate, std::uint64_t seed);

  const std::vector<std::size_t>& layer_dims() const { return dims_; }
  double dropout_rate() const { return dropout_rate_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t input_dim() const { return dims_.front(); }
  std::size_t output_dim() const { return dims_.back(); }

  std::span<const DenseLayer> layers() const { return layers_; }
  std::span<DenseLayer> mutable_layers() { return layers_; }

  std::size_t parameter_count() const;
  /// Weights then biases, layer by layer.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);

  /// Deterministic pass (dropout disabled).
  std::vector<double> forward(std::span<const double> input) const;

  /// Stochastic pass: each hidden unit is kept with probability 1 - rate and
  /// survivors are scaled by 1 / (1 - rate). Any rate in [0, 1) is accepted
  /// here; the admission cap applies to the model's own rate only.
  std::vector<double> forward(std::span<const double> input, double rate, Rng& rng) const;

  void set_dropout_rate(double rate);

  friend bool operator==(const Regressor&, const Regressor&) = default;

 private:
  friend class RegressorBuilder;
  Regressor() = default;

  std::vector<std::size_t> dims_;
  double dropout_rate_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<DenseLayer> layers_;
};

/// Reassembles a regressor from stored parts (model files).
class RegressorBuilder {
 public:
  static Regressor assemble(std::vector<std::size_t> layer_dims, double dropout_rate,
                            std::uint64_t seed, std::vector<DenseLayer> layers);
};

Regressor init_regressor(std::vector<std::size_t> layer_dims, double dropout_rate,
                         std::uint64_t seed);

/// Scalar head of the network. With `dropout_active` the model's own rate is
/// applied and `rng` must be non-null.
double forward(const Regressor& model, std::span<const double> input, bool dropout_active,
               Rng* rng);

/// Model rate: non-negative and at most kMaxDropoutRate ("disregarded rate").
void validate_dropout_rate(double rate);
/// Rate of an explicit stochastic pass: within [0, 1).
void validate_mask_rate(double rate);

}  // namespace lanewatch::nnet
