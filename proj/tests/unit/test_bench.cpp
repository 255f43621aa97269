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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lanewatch/bench/latency.hpp"
#include "lanewatch/common/rng.hpp"

namespace lanewatch::bench {
namespace {

std::vector<std::vector<double>> inputs(std::size_t n) {
  Rng rng(1);
  std::vector<std::vector<double>> out(n, std::vector<double>(9));
  for (auto& x : out) {
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
  }
  return out;
}

uq::Ensemble ensemble(std::size_t n) {
  std::vector<nnet::Regressor> members;
  for (std::size_t s = 1; s <= n; ++s) members.push_back(nnet::init_regressor({9, 32, 16, 1}, 0.0, s));
  return uq::Ensemble(members);
}

/// Median of three repeated measurements.
double median_latency(const FrameFn& fn, const std::vector<std::vector<double>>& xs) {
  std::vector<double> m;
  for (int r = 0; r < 3; ++r) m.push_back(measure_latency(fn, xs, 50).median_ms);
  return median(m);
}

TEST(MeasureLatency, ReportFields) {
  const auto xs = inputs(300);
  const auto r = measure_latency(de_frame(ensemble(3), false), xs, 50);
  EXPECT_EQ(r.input_count, 250u);
  EXPECT_EQ(r.warmup, 50u);
  EXPECT_GT(r.median_ms, 0.0);
  EXPECT_GT(r.mean_ms, 0.0);
  EXPECT_GE(r.p95_ms, r.median_ms);
}

TEST(MeasureLatency, NeedsEnoughInputs) {
  const auto fn = de_frame(ensemble(2), false);
  EXPECT_ERROR_KIND(measure_latency(fn, inputs(100), 100), ErrorKind::kInsufficientData);
  EXPECT_ERROR_KIND(measure_latency(fn, inputs(100), 150), ErrorKind::kInsufficientData);
  EXPECT_ERROR_KIND(measure_latency(fn, inputs(149), 50), ErrorKind::kInsufficientData);
  EXPECT_NO_THROW(measure_latency(fn, inputs(150), 50));
}

TEST(MeasureLatency, RepeatedRunsAreStable) {
  const auto xs = inputs(1000);
  const auto fn = de_frame(ensemble(10), false);
  const double a = median_latency(fn, xs);
  const double b = median_latency(fn, xs);
  EXPECT_LE(std::max(a, b) / std::min(a, b), 1.25);
}

TEST(MeasureLatency, EnsembleCostScalesWithMembers) {
  const auto xs = inputs(1000);
  const double five = median_latency(de_frame(ensemble(5), false), xs);
  const double ten = median_latency(de_frame(ensemble(10), false), xs);
  const double ratio = ten / five;
  EXPECT_GE(ratio, 1.3);
  EXPECT_LE(ratio, 3.0);
}

TEST(MeasureLatency, EqualPassCountsCostAlike) {
  const auto xs = inputs(1000);
  const auto model = nnet::init_regressor({9, 32, 16, 1}, 0.05, 1);
  const double mcd = median_latency(mcd_frame(model, 10, 3), xs);
  const double de = median_latency(de_frame(ensemble(10), false), xs);
  EXPECT_GE(mcd / de, 0.3);
  EXPECT_LE(mcd / de, 3.0);
}

TEST(ParameterBytes, Accounting) {
  const auto model = nnet::init_regressor({9, 32, 16, 1}, 0.05, 1);
  EXPECT_EQ(parameter_bytes(model), model.parameter_count() * 8);
  EXPECT_EQ(parameter_bytes(ensemble(5)), 5 * parameter_bytes(model));
}

TEST(Stats, MedianAndPercentile) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  std::vector<double> xs(100);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(100 - i);
  EXPECT_EQ(percentile(xs, 0.95), 95.0);
  EXPECT_EQ(percentile(xs, 1.0), 100.0);
  EXPECT_ERROR_KIND(percentile(xs, 0.0), ErrorKind::kDomain);
}

TEST(Output, CsvAndJson) {
  BenchReport r;
  r.estimator = "de-5";
  r.mode = "parallel";
  r.size = 5;
  r.median_ms = 0.01;
  const std::vector<BenchReport> rows{r};
  const auto csv = to_csv(rows);
  EXPECT_NE(csv.find("de-5,5,parallel"), std::string::npos) << csv;
  EXPECT_NE(serialize_bench(rows).find("\"lanewatch-bench\""), std::string::npos);
}

}  // namespace
}  // namespace lanewatch::bench
