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

#include <span>
#include <vector>

namespace lanewatch::monitor {

/// Scores equal to zero are moved to this value before fitting; the Gamma
/// support is (0, inf).
inline constexpr double kZeroScoreShift = 1e-12;
inline constexpr std::size_t kMinFitSamples = 30;

struct GammaFit {
  double shape = 0.0;  // kappa
  double scale = 0.0;  // theta
  int iterations = 0;
};

/// Maximum-likelihood Gamma fit. Solves ln k - digamma(k) = ln(mean) - mean(ln)
/// by Newton's method from the closed-form start
/// k0 = (3 - s + sqrt((s - 3)^2 + 24 s)) / (12 s), then scale = mean / k.
GammaFit fit_gamma(std::span<const double> windowed_nominal_scores);

double gamma_cdf(double x, double shape, double scale);

/// gamma-quantile of Gamma(shape, scale), inverted on the regularized
/// incomplete gamma function to |CDF(tau) - gamma| < 1e-9.
double threshold_for(double shape, double scale, double gamma);

/// Confidence levels swept by the study.
const std::vector<double>& confidence_grid();

struct GammaModel {
  double shape = 0.0;
  double scale = 0.0;
  double confidence = 0.0;
  double threshold = 0.0;

  static GammaModel calibrate(double shape, double scale, double confidence);
};

}  // namespace lanewatch::monitor
