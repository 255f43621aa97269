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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lanewatch/common/rng.hpp"
#include "lanewatch/nnet/model_io.hpp"
#include "lanewatch/nnet/regressor.hpp"
#include "lanewatch/nnet/training.hpp"
#include "lanewatch/sim/solid.hpp"

namespace lanewatch::nnet {
namespace {

using testing::default_track;

Regressor single_linear_unit() {
  // 1 -> 1 -> 1: weight-in 1, weight-out 2, zero biases (per layer: weights, then biases).
  Regressor m = init_regressor({1, 1, 1}, 0.0, 0);
  m.set_parameters(std::vector<double>{1.0, 0.0, 2.0, 0.0});
  return m;
}

TEST(InitRegressor, SameSeedIsBitIdentical) {
  const auto a = init_regressor({5, 8, 1}, 0.05, 7);
  const auto b = init_regressor({5, 8, 1}, 0.05, 7);
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  EXPECT_EQ(std::memcmp(pa.data(), pb.data(), pa.size() * sizeof(double)), 0);
  EXPECT_NE(init_regressor({5, 8, 1}, 0.05, 8).parameters(), pa);
}

TEST(InitRegressor, ShapesFollowLayerDims) {
  const auto m = init_regressor({9, 32, 16, 1}, 0.1, 3);
  ASSERT_EQ(m.layers().size(), 3u);
  EXPECT_EQ(m.layers()[0].weights.size(), 32u * 9u);
  EXPECT_EQ(m.layers()[1].biases.size(), 16u);
  EXPECT_EQ(m.parameter_count(), 9u * 32 + 32 + 32u * 16 + 16 + 16 + 1);
  for (const auto& layer : m.layers()) {
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    for (double w : layer.weights) EXPECT_LE(std::abs(w), bound);
    for (double b : layer.biases) EXPECT_EQ(b, 0.0);
  }
}

TEST(InitRegressor, RejectsHighDropoutRate) {
  try {
    init_regressor({5, 8, 1}, 0.45, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("disregarded rate"), std::string::npos);
  }
  EXPECT_NO_THROW(init_regressor({5, 8, 1}, 0.40, 7));
  EXPECT_ERROR_KIND(init_regressor({5, 8, 1}, -0.1, 7), ErrorKind::kConfig);
}

TEST(InitRegressor, DegenerateArchitecture) {
  EXPECT_ERROR_KIND(init_regressor({5}, 0.05, 7), ErrorKind::kShape);
  EXPECT_ERROR_KIND(init_regressor({}, 0.05, 7), ErrorKind::kShape);
  EXPECT_ERROR_KIND(init_regressor({5, 0, 1}, 0.05, 7), ErrorKind::kShape);
}

TEST(Forward, ZeroWeightsGiveOutputBias) {
  auto m = init_regressor({4, 6, 1}, 0.0, 1);
  std::vector<double> p(m.parameter_count(), 0.0);
  p.back() = 0.37;  // output bias
  m.set_parameters(p);
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> x{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    EXPECT_EQ(forward(m, x, false, nullptr), 0.37);
  }
}

TEST(Forward, DeterministicWithoutDropout) {
  const auto m = init_regressor({9, 32, 16, 1}, 0.2, 4);
  const std::vector<double> x{0.1, -0.2, 0.3, 0.0, 0.5, -0.6, 0.7, 0.8, -0.05};
  EXPECT_EQ(forward(m, x, false, nullptr), forward(m, x, false, nullptr));
}

TEST(Forward, DimensionMismatchIsShapeError) {
  const auto m = init_regressor({3, 4, 1}, 0.0, 1);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_ERROR_KIND(forward(m, x, false, nullptr), ErrorKind::kShape);
}

TEST(Forward, StochasticPassNeedsRng) {
  const auto m = init_regressor({1, 1, 1}, 0.05, 0);
  const std::vector<double> x{1.0};
  EXPECT_ERROR_KIND(forward(m, x, true, nullptr), ErrorKind::kPrecondition);
}

TEST(Forward, SingleUnitMaskOutcomes) {
  // Mask enumeration: unit dropped -> 0, kept -> 2 * 1 / (1 - 0.5) = 4.
  const auto m = single_linear_unit();
  const std::vector<double> x{1.0};
  Rng rng(9);
  EXPECT_ERROR_KIND(m.forward(x, 1.0, rng), ErrorKind::kConfig);
  int fours = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double y = m.forward(x, 0.5, rng).front();
    ASSERT_TRUE(y == 0.0 || y == 4.0) << y;
    fours += y == 4.0;
  }
  EXPECT_NEAR(static_cast<double>(fours) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(Forward, InvertedDropoutPreservesMeanOfLinearNet) {
  // Linear network: positive inputs and weights keep every ReLU in its linear part.
  auto m = init_regressor({3, 5, 4, 1}, 0.3, 2);
  auto p = m.parameters();
  for (double& v : p) v = std::abs(v) + 0.05;
  m.set_parameters(p);
  const std::vector<double> x{0.5, 1.0, 1.5};
  const double target = forward(m, x, false, nullptr);
  Rng rng(5);
  double prev_err = 0.0;
  for (int passes : {1000, 100000}) {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < passes; ++i) {
      const double y = m.forward(x, 0.5, rng).front();
      sum += y;
      sq += y * y;
    }
    const double mean = sum / passes;
    const double se = std::sqrt((sq / passes - mean * mean) / passes);
    EXPECT_NEAR(mean, target, 4.0 * se) << passes << " passes";
    if (prev_err > 0.0) EXPECT_LT(se, prev_err);
    prev_err = se;
  }
}

TEST(LossGradient, MatchesCentralDifferences) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = init_regressor({2, 3, 1}, 0.0, 100 + trial);
    auto p = m.parameters();
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    m.set_parameters(p);
    const std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const std::vector<double> y{rng.uniform(-0.5, 0.5)};
    const auto analytic = loss_gradient(m, x, y);
    const double h = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto q = p;
      q[i] = p[i] + h;
      m.set_parameters(q);
      const double up = loss_gradient(m, x, y).loss;
      q[i] = p[i] - h;
      m.set_parameters(q);
      const double down = loss_gradient(m, x, y).loss;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(numeric), std::abs(analytic.gradient[i]), 1e-6});
      max_rel = std::max(max_rel, std::abs(numeric - analytic.gradient[i]) / denom);
    }
    m.set_parameters(p);
    EXPECT_LT(max_rel, 1e-4) << "trial " << trial;
  }
}

Dataset constant_target(double value, std::size_t n) {
  Dataset d;
  Rng rng(8);
  for (std::size_t i = 0; i < n; ++i) {
    d.inputs.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
    d.targets.push_back({value});
  }
  return d;
}

TEST(Train, LearnsConstantTarget) {
  const auto data = constant_target(0.3, 512);
  TrainingConfig cfg;
  cfg.epochs = 300;
  cfg.learning_rate = 1e-2;
  cfg.augmentation_fraction = 0.0;
  cfg.batch_size = 64;
  cfg.patience = 300;
  cfg.seed = 4;
  const auto result = train(init_regressor({3, 8, 1}, 0.0, 3), data, cfg);
  for (const auto& x : data.inputs) EXPECT_NEAR(forward(result.model, x, false, nullptr), 0.3, 0.01);
}

TEST(Train, ZeroLearningRateStopsAtPatiencePlusOne) {
  const auto data = constant_target(0.3, 200);
  TrainingConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.patience = 10;
  cfg.seed = 1;
  const auto result = train(init_regressor({3, 8, 1}, 0.0, 3), data, cfg);
  EXPECT_TRUE(result.stopped_early);
  EXPECT_EQ(static_cast<int>(result.history.size()), cfg.patience + 1);
}

TEST(Train, DeterministicForSameSeeds) {
  const auto& data = testing::demonstrations();
  TrainingConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 5;
  const auto a = train(init_regressor({9, 16, 1}, 0.1, 2), data, cfg);
  const auto b = train(init_regressor({9, 16, 1}, 0.1, 2), data, cfg);
  EXPECT_EQ(a.model, b.model);
  cfg.seed = 6;
  EXPECT_NE(train(init_regressor({9, 16, 1}, 0.1, 2), data, cfg).model, a.model);
}

TEST(Train, ReturnsBestValidationEpoch) {
  const auto& data = testing::demonstrations();
  TrainingConfig cfg;
  cfg.epochs = 25;
  cfg.learning_rate = 3e-2;  // noisy on purpose
  cfg.patience = 25;
  cfg.seed = 2;
  const auto r = train(init_regressor({9, 16, 1}, 0.0, 2), data, cfg);
  const auto best = std::min_element(r.history.begin(), r.history.end(), [](const auto& a, const auto& b) {
    return a.validation_loss < b.validation_loss;
  });
  EXPECT_EQ(r.best_epoch, best->epoch);
  EXPECT_EQ(r.best_validation_loss, best->validation_loss);
  for (const auto& e : r.history) EXPECT_GE(e.validation_loss, r.best_validation_loss);
}

TEST(Train, DivergenceIsReported) {
  auto data = constant_target(0.3, 100);
  data.targets[5][0] = 1e300;
  TrainingConfig cfg;
  cfg.learning_rate = 1.0;
  try {
    train(init_regressor({3, 8, 1}, 0.0, 3), data, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTrainingDiverged);
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos) << e.what();
  }
}

TEST(Train, RejectsBadInputs) {
  TrainingConfig cfg;
  EXPECT_ERROR_KIND(train(init_regressor({3, 8, 1}, 0.0, 3), Dataset{}, cfg), ErrorKind::kInsufficientData);
  auto data = constant_target(0.3, 50);
  data.targets.pop_back();
  EXPECT_ERROR_KIND(train(init_regressor({3, 8, 1}, 0.0, 3), data, cfg), ErrorKind::kShape);
  cfg.patience = 0;
  EXPECT_ERROR_KIND(train(init_regressor({3, 8, 1}, 0.0, 3), constant_target(0.3, 50), cfg), ErrorKind::kConfig);
}

TEST(Dataset, TargetBounds) {
  Dataset d;
  d.inputs = {{0.0}, {1.0}};
  d.targets = {{0.2}, {0.7}};
  EXPECT_NO_THROW(d.validate());
  EXPECT_ERROR_KIND(d.validate(0.5), ErrorKind::kInput);
}

TEST(TrainingConfig, DefaultsMatchStudySetup) {
  const TrainingConfig cfg;
  EXPECT_EQ(cfg.epochs, 50);
  EXPECT_EQ(cfg.batch_size, 128);
  EXPECT_EQ(cfg.learning_rate, 1e-4);
  EXPECT_EQ(cfg.patience, 10);
  EXPECT_EQ(cfg.min_delta, 5e-4);
  EXPECT_EQ(cfg.augmentation_fraction, 0.6);
}

TEST(ModelIo, RoundTripIsExact) {
  const auto m = init_regressor({9, 32, 16, 1}, 0.05, 77);
  const auto text = serialize_regressor(m);
  EXPECT_EQ(deserialize_regressor(text), m);
  EXPECT_EQ(serialize_regressor(deserialize_regressor(text)), text);
  const auto dir = testing::scratch_dir("model-io");
  save_regressor(m, dir / "m.model");
  EXPECT_EQ(load_regressor(dir / "m.model"), m);
}

TEST(ModelIo, RejectsCorruptFiles) {
  auto text = serialize_regressor(init_regressor({3, 4, 1}, 0.05, 1));
  EXPECT_ERROR_KIND(deserialize_regressor("garbage"), ErrorKind::kParse);
  EXPECT_ERROR_KIND(deserialize_regressor(text.substr(0, text.size() / 2)), ErrorKind::kParse);
  EXPECT_ERROR_KIND(load_regressor("/nonexistent/m.model"), ErrorKind::kIo);
}

TEST(IsSolid, ExpertControllerIsSolid) {
  EXPECT_TRUE(sim::is_solid(sim::expert_controller(), default_track(), 2));
}

TEST(IsSolid, ConstantSteeringIsNot) {
  // Zero weights: the output is the output bias, whatever the observation.
  for (double steer : {0.0, 0.3, -0.3}) {
    auto m = init_regressor({9, 32, 16, 1}, 0.05, 1);
    std::vector<double> p(m.parameters().size(), 0.0);
    p.back() = steer;
    m.set_parameters(p);
    EXPECT_FALSE(sim::is_solid(m, default_track(), 2)) << steer;
  }
}

TEST(IsSolid, TrainedControllerIsSolid) {
  EXPECT_TRUE(sim::is_solid(testing::trained_controller(), default_track(), 2));
}

TEST(IsSolid, TooFewLapsIsPreconditionError) {
  EXPECT_ERROR_KIND(sim::is_solid(sim::expert_controller(), default_track(), 0), ErrorKind::kPrecondition);
  EXPECT_ERROR_KIND(sim::is_solid(sim::expert_controller(), default_track(), 1), ErrorKind::kPrecondition);
}

}  // namespace
}  // namespace lanewatch::nnet
