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

#include "lanewatch/nnet/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lanewatch/common/error.hpp"

namespace lanewatch::nnet {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kNominal: return "nominal";
    case Provenance::kMutatedLabels: return "mutated-labels";
    case Provenance::kObservations: return "observations";
  }
  return "unknown";
}

void Dataset::validate(std::optional<double> target_bound) const {
  require(inputs.size() == targets.size(), ErrorKind::kShape,
          "dataset inputs and targets differ in length");
  if (inputs.empty()) return;
  const std::size_t in_dim = inputs.front().size();
  const std::size_t out_dim = targets.front().size();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    require(inputs[i].size() == in_dim && targets[i].size() == out_dim, ErrorKind::kShape,
            "sample " + std::to_string(i) + " has inconsistent width");
    if (target_bound) {
      for (double t : targets[i]) {
        require(std::abs(t) <= *target_bound, ErrorKind::kInput,
                "target " + std::to_string(t) + " outside steering bounds");
      }
    }
  }
}

void TrainingConfig::validate() const {
  require(epochs > 0 && batch_size > 0 && patience > 0, ErrorKind::kConfig,
          "epochs, batch_size and patience must be positive");
  require(learning_rate >= 0.0, ErrorKind::kConfig, "learning_rate must be non-negative");
  require(min_delta >= 0.0, ErrorKind::kConfig, "min_delta must be non-negative");
  require(validation_fraction > 0.0 && validation_fraction < 1.0, ErrorKind::kConfig,
          "validation_fraction must lie in (0, 1)");
  require(augmentation_fraction >= 0.0 && augmentation_fraction <= 1.0, ErrorKind::kConfig,
          "augmentation_fraction must lie in [0, 1]");
  require(jitter_std >= 0.0, ErrorKind::kConfig, "jitter_std must be non-negative");
}

namespace {

// Forward/backward scratch for one network shape.
class Backprop {
 public:
  explicit Backprop(const Regressor& model) {
    const auto layers = model.layers();
    std::size_t offset = 0;
    for (const auto& layer : layers) {
      weight_offsets_.push_back(offset);
      offset += layer.weights.size();
      bias_offsets_.push_back(offset);
      offset += layer.biases.size();
    }
    activations_.resize(layers.size() + 1);
    pre_.resize(layers.size());
    mask_.resize(layers.size());
  }

  // Adds d(loss)/d(params) into `grad`; returns the sample loss.
  double accumulate(std::span<const DenseLayer> layers, std::span<const double> input,
                    std::span<const double> target, double rate, Rng* rng,
                    std::vector<double>& grad) {
    const bool drop = rng != nullptr && rate > 0.0;
    const double keep_scale = drop ? 1.0 / (1.0 - rate) : 1.0;
    activations_[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const DenseLayer& layer = layers[l];
      const bool hidden = l + 1 < layers.size();
      auto& z = pre_[l];
      auto& a = activations_[l + 1];
      auto& m = mask_[l];
      z.assign(layer.outputs, 0.0);
      a.assign(layer.outputs, 0.0);
      m.assign(layer.outputs, 1.0);
      const auto& prev = activations_[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double* row = layer.weights.data() + o * layer.inputs;
        double acc = layer.biases[o];
        for (std::size_t i = 0; i < layer.inputs; ++i) acc += row[i] * prev[i];
        z[o] = acc;
        if (hidden) {
          if (drop) m[o] = rng->uniform() < rate ? 0.0 : keep_scale;
          a[o] = std::max(acc, 0.0) * m[o];
        } else {
          a[o] = acc;
        }
      }
    }

    const auto& out = activations_.back();
    const double inv_m = 1.0 / static_cast<double>(out.size());
    double loss = 0.0;
    delta_.assign(out.size(), 0.0);
    for (std::size_t o = 0; o < out.size(); ++o) {
      const double r = out[o] - target[o];
      loss += r * r * inv_m;
      delta_[o] = 2.0 * r * inv_m;
    }

    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& layer = layers[l];
      const auto& prev = activations_[l];
      double* gw = grad.data() + weight_offsets_[l];
      double* gb = grad.data() + bias_offsets_[l];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta_[o];
        gb[o] += d;
        double* grow = gw + o * layer.inputs;
        for (std::size_t i = 0; i < layer.inputs; ++i) grow[i] += d * prev[i];
      }
      if (l == 0) break;
      next_delta_.assign(layer.inputs, 0.0);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        const double d = delta_[o];
        const double* row = layer.weights.data() + o * layer.inputs;
        for (std::size_t i = 0; i < layer.inputs; ++i) next_delta_[i] += row[i] * d;
      }
      const auto& z = pre_[l - 1];
      const auto& m = mask_[l - 1];
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        next_delta_[i] = z[i] > 0.0 ? next_delta_[i] * m[i] : 0.0;
      }
      delta_.swap(next_delta_);
    }
    return loss;
  }

 private:
  std::vector<std::size_t> weight_offsets_;
  std::vector<std::size_t> bias_offsets_;
  std::vector<std::vector<double>> activations_;
  std::vector<std::vector<double>> pre_;
  std::vector<std::vector<double>> mask_;
  std::vector<double> delta_;
  std::vector<double> next_delta_;
};

class Adam {
 public:
  explicit Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      m_[k] = kBeta1 * m_[k] + (1.0 - kBeta1) * grad[k];
      v_[k] = kBeta2 * v_[k] + (1.0 - kBeta2) * grad[k] * grad[k];
      const double m_hat = m_[k] / c1;
      const double v_hat = v_[k] / c2;
      params[k] -= lr_ * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }

 private:
  double lr_;
  std::vector<double> m_;
  std::vector<double> v_;
  double t_ = 0.0;
};

double mse_over(const Regressor& model, const Dataset& data, std::span<const std::size_t> idx) {
  double total = 0.0;
  for (std::size_t k : idx) {
    const auto out = model.forward(data.inputs[k]);
    const auto& y = data.targets[k];
    double s = 0.0;
    for (std::size_t o = 0; o < out.size(); ++o) s += (out[o] - y[o]) * (out[o] - y[o]);
    total += s / static_cast<double>(out.size());
  }
  return total / static_cast<double>(idx.size());
}

void check_widths(const Regressor& model, const Dataset& data) {
  require(data.inputs.front().size() == model.input_dim(), ErrorKind::kShape,
          "dataset input width does not match the model");
  require(data.targets.front().size() == model.output_dim(), ErrorKind::kShape,
          "dataset target width does not match the model");
}

}  // namespace

double evaluate_mse(const Regressor& model, const Dataset& data) {
  require(!data.empty(), ErrorKind::kInsufficientData, "empty dataset");
  data.validate();
  check_widths(model, data);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  return mse_over(model, data, idx);
}

LossGradient loss_gradient(const Regressor& model, std::span<const double> input,
                           std::span<const double> target) {
  require(input.size() == model.input_dim() && target.size() == model.output_dim(),
          ErrorKind::kShape, "sample width does not match the model");
  Backprop bp(model);
  LossGradient out;
  out.gradient.assign(model.parameter_count(), 0.0);
  out.loss = bp.accumulate(model.layers(), input, target, 0.0, nullptr, out.gradient);
  return out;
}

TrainingResult train(Regressor model, const Dataset& data, const TrainingConfig& cfg) {
  cfg.validate();
  require(!data.empty(), ErrorKind::kInsufficientData, "training dataset is empty");
  data.validate();
  check_widths(model, data);

  const std::size_t n = data.size();
  const auto n_val = static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(n)));
  require(n_val >= 1 && n_val < n, ErrorKind::kInsufficientData,
          "validation split of " + std::to_string(n) + " samples is empty on one side");

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());

  std::vector<double> params = model.parameters();
  std::vector<double> grad(params.size(), 0.0);
  Adam adam(params.size(), cfg.learning_rate);
  Backprop bp(model);

  TrainingResult result{model, {}, 0, std::numeric_limits<double>::infinity(), false};
  std::vector<double> best_params = params;
  double reference = std::numeric_limits<double>::infinity();
  int wait = 0;

  const std::size_t in_dim = model.input_dim();
  const std::size_t out_dim = model.output_dim();
  std::vector<double> x(in_dim);
  std::vector<double> y(out_dim);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(train_idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t k = train_idx[b];
        const auto& src_x = data.inputs[k];
        const auto& src_y = data.targets[k];
        if (rng.uniform() < cfg.augmentation_fraction) {
          for (std::size_t i = 0; i < in_dim; ++i) x[i] = -src_x[i] + cfg.jitter_std * rng.normal();
          for (std::size_t o = 0; o < out_dim; ++o) y[o] = -src_y[o];
        } else {
          std::copy(src_x.begin(), src_x.end(), x.begin());
          std::copy(src_y.begin(), src_y.end(), y.begin());
        }
        epoch_loss += bp.accumulate(model.layers(), x, y, model.dropout_rate(), &rng, grad);
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (double& g : grad) g *= inv;
      adam.step(params, grad);
      model.set_parameters(params);
    }
    epoch_loss /= static_cast<double>(train_idx.size());
    const double val_loss = mse_over(model, data, val_idx);
    if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss)) {
      fail(ErrorKind::kTrainingDiverged, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.history.push_back({epoch, epoch_loss, val_loss});

    if (val_loss < result.best_validation_loss) {
      result.best_validation_loss = val_loss;
      result.best_epoch = epoch;
      best_params = params;
    }
    if (val_loss < reference - cfg.min_delta) {
      reference = val_loss;
      wait = 0;
    } else if (++wait >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }

  model.set_parameters(best_params);
  result.model = std::move(model);
  return result;
}

}  // namespace lanewatch::nnet
