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

#include <cmath>
#include <random>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lanewatch/common/rng.hpp"
#include "lanewatch/monitor/calibration.hpp"
#include "lanewatch/monitor/gamma_fit.hpp"
#include "lanewatch/monitor/special_functions.hpp"
#include "lanewatch/monitor/windowing.hpp"

namespace lanewatch::monitor {
namespace {

std::vector<double> gamma_draws(double shape, double scale, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::gamma_distribution<double> dist(shape, scale);
  std::vector<double> out(n);
  for (double& x : out) x = dist(rng);
  return out;
}

TEST(SpecialFunctions, MatchBoost) {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 30.0, 1e3}) {
    EXPECT_NEAR(digamma(x), boost::math::digamma(x), 1e-10 * std::max(1.0, std::abs(boost::math::digamma(x)))) << x;
    EXPECT_NEAR(trigamma(x), boost::math::trigamma(x), 1e-9 * boost::math::trigamma(x)) << x;
  }
  for (double a : {0.3, 1.0, 2.0, 5.5, 40.0}) {
    for (double x : {0.0, 0.01, 0.5, 1.0, 3.0, 10.0, 80.0}) {
      EXPECT_NEAR(regularized_gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12) << a << " " << x;
    }
  }
  EXPECT_ERROR_KIND(digamma(0.0), ErrorKind::kDomain);
  EXPECT_ERROR_KIND(regularized_gamma_p(1.0, -1.0), ErrorKind::kDomain);
}

TEST(ThresholdFor, ClosedFormExamples) {
  EXPECT_NEAR(threshold_for(1.0, 1.0, 0.95), 2.995732, 1e-6);
  EXPECT_NEAR(threshold_for(2.0, 1.0, 0.5), 1.67835, 1e-5);
  EXPECT_NEAR(threshold_for(1.0, 2.0, 0.95), 5.991465, 1e-6);
}

TEST(ThresholdFor, MatchesBoostInverse) {
  for (double k : {0.3, 0.8, 1.0, 2.0, 7.5}) {
    for (double g : {0.5, 0.95, 0.99, 0.999, 0.9999, 0.99999}) {
      const double tau = threshold_for(k, 0.7, g);
      EXPECT_NEAR(tau, 0.7 * boost::math::gamma_p_inv(k, g), 1e-7 * tau) << k << " " << g;
      EXPECT_NEAR(gamma_cdf(tau, k, 0.7), g, 1e-9);
    }
  }
}

TEST(ThresholdFor, MonotoneAndScaleLinear) {
  double prev = 0.0;
  for (double g : confidence_grid()) {
    const double tau = threshold_for(1.7, 0.4, g);
    EXPECT_GT(tau, prev);
    prev = tau;
    EXPECT_NEAR(threshold_for(1.7, 0.4 * 3.0, g), 3.0 * tau, 1e-9 * tau);
  }
}

TEST(ThresholdFor, DomainErrors) {
  EXPECT_ERROR_KIND(threshold_for(1.0, 1.0, 0.0), ErrorKind::kDomain);
  EXPECT_ERROR_KIND(threshold_for(1.0, 1.0, 1.0), ErrorKind::kDomain);
  EXPECT_ERROR_KIND(threshold_for(0.0, 1.0, 0.5), ErrorKind::kDomain);
}

TEST(ConfidenceGrid, Values) {
  EXPECT_EQ(confidence_grid(), (std::vector<double>{0.95, 0.99, 0.999, 0.9999, 0.99999}));
}

TEST(FitGamma, RecoversParameters) {
  const auto xs = gamma_draws(2.0, 0.5, 100000, 1);
  const auto fit = fit_gamma(xs);
  EXPECT_GE(fit.shape, 1.94);
  EXPECT_LE(fit.shape, 2.06);
  EXPECT_GE(fit.scale, 0.485);
  EXPECT_LE(fit.scale, 0.515);
  // Method-of-moments oracle on the same draws.
  double m = 0.0, v = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size());
  EXPECT_NEAR(fit.shape, m * m / v, 0.05 * fit.shape);
  EXPECT_NEAR(fit.shape * fit.scale, m, 1e-9 * m);
}

TEST(FitGamma, ExponentialData) {
  Rng rng(2);
  std::vector<double> xs(100000);
  for (double& x : xs) x = -std::log(1.0 - rng.uniform());
  const auto fit = fit_gamma(xs);
  EXPECT_GE(fit.shape, 0.97);
  EXPECT_LE(fit.shape, 1.03);
}

TEST(FitGamma, ScaleEquivariant) {
  const auto xs = gamma_draws(0.8, 2.0, 5000, 3);
  const auto base = fit_gamma(xs);
  for (double c : {1e-4, 0.3, 250.0}) {
    std::vector<double> ys = xs;
    for (double& y : ys) y *= c;
    const auto f = fit_gamma(ys);
    EXPECT_NEAR(f.shape, base.shape, 1e-6 * base.shape);
    EXPECT_NEAR(f.scale, c * base.scale, 1e-6 * c * base.scale);
  }
}

TEST(FitGamma, Errors) {
  EXPECT_ERROR_KIND(fit_gamma(std::vector<double>(1000, 1.0)), ErrorKind::kFit);
  auto xs = gamma_draws(2.0, 1.0, 100, 4);
  xs[3] = -1.0;
  EXPECT_ERROR_KIND(fit_gamma(xs), ErrorKind::kDomain);
  EXPECT_ERROR_KIND(fit_gamma(std::vector<double>{1.0, 2.0}), ErrorKind::kInsufficientData);
}

TEST(FitGamma, ZeroScoresAreShifted) {
  auto xs = gamma_draws(2.0, 1.0, 200, 5);
  xs[0] = 0.0;
  const auto fit = fit_gamma(xs);
  EXPECT_TRUE(std::isfinite(fit.shape));
  EXPECT_GT(fit.shape, 0.0);
}

TEST(Calibration, AlarmRateWithinBinomialInterval) {
  const auto fit = fit_gamma(gamma_draws(1.5, 0.02, 5000, 6));
  const std::size_t n = 10000;
  for (double g : {0.95, 0.99, 0.999}) {
    const double tau = threshold_for(fit.shape, fit.scale, g);
    const auto fresh = gamma_draws(fit.shape, fit.scale, n, 7 + static_cast<std::uint64_t>(g * 1000));
    std::size_t alarms = 0;
    for (double x : fresh) alarms += x > tau;
    const boost::math::binomial_distribution<double> binom(static_cast<double>(n), 1.0 - g);
    EXPECT_GE(static_cast<double>(alarms), boost::math::quantile(binom, 0.005)) << g;
    EXPECT_LE(static_cast<double>(alarms), boost::math::quantile(boost::math::complement(binom, 0.005))) << g;
  }
}

TEST(Calibration, ArtifactThresholdsIncreaseAndRoundTrip) {
  const auto scores = gamma_draws(2.0, 0.1, 300, 8);
  auto art = calibrate(scores, confidence_grid());
  ASSERT_EQ(art.thresholds.size(), 5u);
  for (std::size_t i = 1; i < art.thresholds.size(); ++i) {
    EXPECT_GT(art.thresholds[i].threshold, art.thresholds[i - 1].threshold);
  }
  EXPECT_EQ(art.sample_count, 300u);
  EXPECT_EQ(art.threshold(0.99), threshold_for(art.shape, art.scale, 0.99));
  EXPECT_ERROR_KIND(art.threshold(0.5), ErrorKind::kConfig);
  art.estimator = "de5";
  art.benchmark = "ood";
  art.window_len_frames = 20;
  art.nominal_trace = "traces/x.jsonl";
  art.nominal_trace_checksum = "0123456789abcdef";
  const auto back = parse_calibration(serialize_calibration(art));
  EXPECT_EQ(back.shape, art.shape);
  EXPECT_EQ(back.scale, art.scale);
  EXPECT_EQ(back.window_len_frames, 20u);
  EXPECT_EQ(back.nominal_trace_checksum, art.nominal_trace_checksum);
  EXPECT_EQ(back.thresholds.back().threshold, art.thresholds.back().threshold);
  EXPECT_ERROR_KIND(parse_calibration("{}"), ErrorKind::kParse);
}

TEST(WindowScores, Examples) {
  EXPECT_EQ(window_scores(std::vector<double>{1, 2, 3}, 3), (std::vector<double>{3}));
  const std::vector<double> xs{4, 1, 7, 0, 2};
  EXPECT_EQ(window_scores(xs, 1), xs);
  std::vector<double> ten{1, 9, 2, 3, 4, 5, 8, 6, 100, 100};
  EXPECT_EQ(window_scores(ten, 4), (std::vector<double>{9, 8}));
  EXPECT_TRUE(window_scores(std::vector<double>{}, 4).empty());
  EXPECT_ERROR_KIND(window_scores(xs, 0), ErrorKind::kConfig);
}

TEST(ScoreSeries, Validation) {
  ScoreSeries s{{0.1, 0.2}, {0.0, 0.05}, "de5", "ep"};
  EXPECT_NO_THROW(s.validate());
  s.timestamps = {0.0, 0.0};
  EXPECT_ERROR_KIND(s.validate(), ErrorKind::kInput);
  s.timestamps = {0.0};
  EXPECT_ERROR_KIND(s.validate(), ErrorKind::kShape);
  s = {{0.1, -0.2}, {0.0, 0.05}, "de5", "ep"};
  EXPECT_ERROR_KIND(s.validate(), ErrorKind::kInput);
}

GammaModel model_with_threshold(double tau) {
  GammaModel m;
  m.shape = 1.0;
  m.scale = 1.0;
  m.confidence = 0.99;
  m.threshold = tau;
  return m;
}

TEST(MonitorStep, Examples) {
  MonitorState a(2, model_with_threshold(5.0));
  EXPECT_FALSE(monitor_step(a, 1.0).has_value());
  EXPECT_EQ(monitor_step(a, 2.0), std::optional<bool>(false));

  MonitorState b(2, model_with_threshold(5.0));
  EXPECT_FALSE(monitor_step(b, 1.0).has_value());
  EXPECT_EQ(monitor_step(b, 6.0), std::optional<bool>(true));

  MonitorState c(3, model_with_threshold(5.0));
  EXPECT_FALSE(monitor_step(c, 9.0).has_value());
  EXPECT_FALSE(monitor_step(c, 0.0).has_value());
  EXPECT_EQ(monitor_step(c, 0.0), std::optional<bool>(true));
  // Running max starts over with the next window.
  EXPECT_FALSE(monitor_step(c, 1.0).has_value());
  EXPECT_EQ(c.running_max(), 1.0);
  EXPECT_EQ(c.frames_in_window(), 1u);

  EXPECT_ERROR_KIND(monitor_step(c, -1.0), ErrorKind::kInput);
}

TEST(MonitorStep, MatchesBatchWindows) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = 1 + rng.index(25);
    const std::size_t n = rng.index(400);
    std::vector<double> scores(n);
    for (double& s : scores) s = rng.bernoulli(0.1) ? 0.0 : -std::log(1.0 - rng.uniform());
    const double tau = rng.uniform(0.5, 4.0);
    MonitorState state(w, model_with_threshold(tau));
    std::vector<bool> online;
    for (double s : scores) {
      if (auto alarm = monitor_step(state, s)) online.push_back(*alarm);
    }
    std::vector<bool> offline;
    for (double m : window_scores(scores, w)) offline.push_back(m > tau);
    EXPECT_EQ(online, offline) << "trial " << trial;
  }
}

TEST(MonitorState, RequiresCalibratedModel) {
  EXPECT_ERROR_KIND(MonitorState(0, model_with_threshold(1.0)), ErrorKind::kConfig);
  EXPECT_ERROR_KIND(MonitorState(3, model_with_threshold(0.0)), ErrorKind::kConfig);
  const auto m = GammaModel::calibrate(2.0, 1.0, 0.5);
  EXPECT_NEAR(m.threshold, 1.67835, 1e-5);
}

}  // namespace
}  // namespace lanewatch::monitor
