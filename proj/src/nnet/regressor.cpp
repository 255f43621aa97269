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

#include "lanewatch/nnet/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lanewatch/common/error.hpp"

namespace lanewatch::nnet {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) {
    fail(ErrorKind::kShape, "layer_dims needs at least input and output sizes, got " +
                                std::to_string(dims.size()) + " entries");
  }
  for (std::size_t d : dims) require(d > 0, ErrorKind::kShape, "layer width must be positive");
}

// Shared pass. `rng` null means deterministic.
std::vector<double> run(const std::vector<DenseLayer>& layers, std::span<const double> input,
                        double rate, Rng* rng) {
  if (input.size() != layers.front().inputs) {
    fail(ErrorKind::kShape, "input has " + std::to_string(input.size()) + " features, model expects " +
                                std::to_string(layers.front().inputs));
  }
  const bool drop = rng != nullptr && rate > 0.0;
  const double keep_scale = drop ? 1.0 / (1.0 - rate) : 1.0;
  std::vector<double> current(input.begin(), input.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    const bool hidden = l + 1 < layers.size();
    next.assign(layer.outputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = layer.weights.data() + o * layer.inputs;
      double acc = layer.biases[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) acc += row[i] * current[i];
      if (hidden) {
        acc = std::max(acc, 0.0);
        if (drop) acc = rng->uniform() < rate ? 0.0 : acc * keep_scale;
      }
      next[o] = acc;
    }
    current.swap(next);
  }
  return current;
}

}  // namespace

void validate_dropout_rate(double rate) {
  if (!(rate >= 0.0)) fail(ErrorKind::kConfig, "dropout rate must be non-negative");
  if (rate > Regressor::kMaxDropoutRate) {
    fail(ErrorKind::kConfig, "disregarded rate: dropout " + std::to_string(rate) +
                                 " exceeds the admissible maximum of 0.40");
  }
}

Regressor::Regressor(std::vector<std::size_t> layer_dims, double dropout_rate,
                     std::uint64_t seed)
    : dims_(std::move(layer_dims)), dropout_rate_(dropout_rate), seed_(seed) {
  check_dims(dims_);
  validate_dropout_rate(dropout_rate_);
  Rng rng(seed_);
  layers_.reserve(dims_.size() - 1);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    DenseLayer layer;
    layer.inputs = dims_[l];
    layer.outputs = dims_[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    layer.biases.assign(layer.outputs, 0.0);
    layers_.push_back(std::move(layer));
  }
}

std::size_t Regressor::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weights.size() + layer.biases.size();
  return n;
}

std::vector<double> Regressor::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& layer : layers_) {
    out.insert(out.end(), layer.weights.begin(), layer.weights.end());
    out.insert(out.end(), layer.biases.begin(), layer.biases.end());
  }
  return out;
}

void Regressor::set_parameters(std::span<const double> params) {
  require(params.size() == parameter_count(), ErrorKind::kShape,
          "parameter vector length does not match the architecture");
  std::size_t k = 0;
  for (auto& layer : layers_) {
    for (double& w : layer.weights) w = params[k++];
    for (double& b : layer.biases) b = params[k++];
  }
}

void validate_mask_rate(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) fail(ErrorKind::kConfig, "dropout mask rate must lie in [0, 1)");
}

std::vector<double> Regressor::forward(std::span<const double> input) const {
  return run(layers_, input, 0.0, nullptr);
}

std::vector<double> Regressor::forward(std::span<const double> input, double rate,
                                       Rng& rng) const {
  validate_mask_rate(rate);
  return run(layers_, input, rate, &rng);
}

void Regressor::set_dropout_rate(double rate) {
  validate_dropout_rate(rate);
  dropout_rate_ = rate;
}

Regressor RegressorBuilder::assemble(std::vector<std::size_t> layer_dims, double dropout_rate,
                                     std::uint64_t seed, std::vector<DenseLayer> layers) {
  check_dims(layer_dims);
  validate_dropout_rate(dropout_rate);
  require(layers.size() + 1 == layer_dims.size(), ErrorKind::kShape,
          "layer count does not match layer_dims");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    require(layer.inputs == layer_dims[l] && layer.outputs == layer_dims[l + 1] &&
                layer.weights.size() == layer.inputs * layer.outputs &&
                layer.biases.size() == layer.outputs,
            ErrorKind::kShape, "layer " + std::to_string(l) + " shape is inconsistent");
  }
  Regressor model;
  model.dims_ = std::move(layer_dims);
  model.dropout_rate_ = dropout_rate;
  model.seed_ = seed;
  model.layers_ = std::move(layers);
  return model;
}

Regressor init_regressor(std::vector<std::size_t> layer_dims, double dropout_rate,
                         std::uint64_t seed) {
  return Regressor(std::move(layer_dims), dropout_rate, seed);
}

double forward(const Regressor& model, std::span<const double> input, bool dropout_active,
               Rng* rng) {
  if (dropout_active) {
    require(rng != nullptr, ErrorKind::kPrecondition, "stochastic forward needs a random stream");
    return model.forward(input, model.dropout_rate(), *rng).front();
  }
  return model.forward(input).front();
}

}  // namespace lanewatch::nnet
