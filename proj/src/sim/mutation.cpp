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

#include "lanewatch/sim/mutation.hpp"

#include <cmath>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/common/rng.hpp"

namespace lanewatch::sim {

std::string to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::kWeightFuzz: return "weight-gaussian-fuzz";
    case MutationKind::kLabelNoiseRetrain: return "label-noise-retrain";
    case MutationKind::kUnderTraining: return "under-training";
  }
  return "unknown";
}

MutationKind parse_mutation_kind(std::string_view text) {
  for (auto k : {MutationKind::kWeightFuzz, MutationKind::kLabelNoiseRetrain, MutationKind::kUnderTraining}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::kParse, "unknown mutation kind '" + std::string(text) + "'");
}

void MutationOp::validate() const {
  const std::string m = format_short(magnitude);
  require(std::isfinite(magnitude), ErrorKind::kConfig, "mutation magnitude must be finite");
  switch (kind) {
    case MutationKind::kWeightFuzz:
      require(magnitude >= 0.0 && magnitude <= kMaxFuzzStd, ErrorKind::kConfig,
              "weight fuzz magnitude " + m + " outside [0, 2]");
      break;
    case MutationKind::kLabelNoiseRetrain:
      require(magnitude >= 0.0 && magnitude <= kMaxLabelNoiseStd, ErrorKind::kConfig,
              "label noise magnitude " + m + " outside [0, 1] rad");
      require(label_fraction > 0.0 && label_fraction <= 1.0, ErrorKind::kConfig,
              "label noise fraction must lie in (0, 1]");
      break;
    case MutationKind::kUnderTraining:
      require(magnitude == std::floor(magnitude) && magnitude >= kMinUnderTrainingEpochs &&
                  magnitude <= kMaxUnderTrainingEpochs,
              ErrorKind::kConfig, "under-training epochs " + m + " must be an integer in [1, 49]");
      break;
  }
}

nnet::Regressor fuzz_weights(const nnet::Regressor& model, const MutationOp& op) {
  op.validate();
  require(op.kind == MutationKind::kWeightFuzz, ErrorKind::kPrecondition, "fuzz_weights needs a fuzz op");
  nnet::Regressor out = model;
  if (op.magnitude == 0.0) return out;
  Rng rng(op.seed);
  for (auto& layer : out.mutable_layers()) {
    for (double& w : layer.weights) w += op.magnitude * rng.normal();
  }
  return out;
}

nnet::Dataset noisy_labels(const nnet::Dataset& data, const MutationOp& op) {
  op.validate();
  require(op.kind == MutationKind::kLabelNoiseRetrain, ErrorKind::kPrecondition,
          "noisy_labels needs a label-noise op");
  nnet::Dataset out = data;
  out.provenance = nnet::Provenance::kMutatedLabels;
  Rng rng(op.seed);
  for (auto& target : out.targets) {
    if (!rng.bernoulli(op.label_fraction)) continue;
    for (double& y : target) y += op.magnitude * rng.normal();
  }
  return out;
}

nnet::Regressor mutate(const nnet::Regressor& model, const nnet::Dataset& data,
                       const nnet::TrainingConfig& cfg, const MutationOp& op) {
  op.validate();
  if (op.kind == MutationKind::kWeightFuzz) return fuzz_weights(model, op);

  auto fresh = nnet::init_regressor(model.layer_dims(), model.dropout_rate(), model.seed());
  nnet::TrainingConfig tc = cfg;
  tc.seed = op.seed;
  if (op.kind == MutationKind::kUnderTraining) {
    tc.epochs = static_cast<int>(op.magnitude);
    return nnet::train(std::move(fresh), data, tc).model;
  }
  return nnet::train(std::move(fresh), noisy_labels(data, op), tc).model;
}

}  // namespace lanewatch::sim
