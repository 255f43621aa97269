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

#include "lanewatch/monitor/gamma_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lanewatch/common/error.hpp"
#include "lanewatch/monitor/special_functions.hpp"

namespace lanewatch::monitor {

GammaFit fit_gamma(std::span<const double> scores) {
  require(scores.size() >= kMinFitSamples, ErrorKind::kInsufficientData,
          "gamma fit needs at least " + std::to_string(kMinFitSamples) + " windowed scores, got " +
              std::to_string(scores.size()));
  double sum = 0.0;
  double sum_log = 0.0;
  double lo = HUGE_VAL;
  double hi = -HUGE_VAL;
  for (double raw : scores) {
    require(std::isfinite(raw), ErrorKind::kDomain, "non-finite score in gamma fit input");
    const double v = raw == 0.0 ? kZeroScoreShift : raw;
    require(v > 0.0, ErrorKind::kDomain, "negative score " + std::to_string(raw) + " in gamma fit input");
    sum += v;
    sum_log += std::log(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) fail(ErrorKind::kFit, "zero-variance scores; gamma fit is degenerate");

  const double n = static_cast<double>(scores.size());
  const double mean = sum / n;
  const double s = std::log(mean) - sum_log / n;
  if (!(s > 0.0)) fail(ErrorKind::kFit, "scores too concentrated for a gamma fit (s = " + std::to_string(s) + ")");

  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  int it = 0;
  for (; it < 100; ++it) {
    const double f = std::log(k) - digamma(k) - s;
    const double df = 1.0 / k - trigamma(k);
    double next = k - f / df;
    if (!(next > 0.0)) next = 0.5 * k;
    const double step = std::abs(next - k);
    k = next;
    if (step < 1e-10) {
      ++it;
      break;
    }
  }
  return {k, mean / k, it};
}

double gamma_cdf(double x, double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, ErrorKind::kDomain, "gamma parameters must be positive");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(shape, x / scale);
}

double threshold_for(double shape, double scale, double gamma) {
  require(shape > 0.0 && scale > 0.0, ErrorKind::kDomain, "gamma parameters must be positive");
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::kDomain,
          "confidence must lie in (0, 1), got " + std::to_string(gamma));

  // Work on the unit-scale variable, then rescale.
  double lo = 0.0;
  double hi = std::max(1.0, shape);
  while (regularized_gamma_p(shape, hi) < gamma) {
    lo = hi;
    hi *= 2.0;
  }
  const double log_norm = std::lgamma(shape);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double err = regularized_gamma_p(shape, x) - gamma;
    if (std::abs(err) < 1e-13) break;
    if (err < 0.0) lo = x;
    else hi = x;
    const double pdf = std::exp((shape - 1.0) * std::log(x) - x - log_norm);
    double next = pdf > 0.0 ? x - err / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * hi) break;
    x = next;
  }
  return x * scale;
}

const std::vector<double>& confidence_grid() {
  static const std::vector<double> grid{0.95, 0.99, 0.999, 0.9999, 0.99999};
  return grid;
}

GammaModel GammaModel::calibrate(double shape, double scale, double confidence) {
  return {shape, scale, confidence, threshold_for(shape, scale, confidence)};
}

}  // namespace lanewatch::monitor
