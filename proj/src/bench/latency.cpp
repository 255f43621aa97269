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

#include "lanewatch/bench/latency.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include <json.hpp>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/common/rng.hpp"

namespace lanewatch::bench {

double median(std::vector<double> xs) {
  require(!xs.empty(), ErrorKind::kInsufficientData, "median of an empty sample");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double hi = xs[mid];
  if (xs.size() % 2 == 1) return hi;
  const double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double percentile(std::vector<double> xs, double q) {
  require(!xs.empty(), ErrorKind::kInsufficientData, "percentile of an empty sample");
  require(q > 0.0 && q <= 1.0, ErrorKind::kDomain, "percentile level must lie in (0, 1]");
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
  return xs[std::max<std::size_t>(rank, 1) - 1];
}

BenchReport measure_latency(const FrameFn& fn, std::span<const std::vector<double>> inputs,
                            std::size_t warmup) {
  require(warmup < inputs.size(), ErrorKind::kInsufficientData,
          "warmup (" + std::to_string(warmup) + ") leaves no inputs to measure");
  require(inputs.size() - warmup >= kMinMeasuredInputs, ErrorKind::kInsufficientData,
          "need at least 100 measured inputs, got " + std::to_string(inputs.size() - warmup));
  using clock = std::chrono::steady_clock;
  volatile double sink = 0.0;
  for (std::size_t i = 0; i < warmup; ++i) sink = sink + fn(inputs[i]);
  std::vector<double> ms;
  ms.reserve(inputs.size() - warmup);
  for (std::size_t i = warmup; i < inputs.size(); ++i) {
    const auto t0 = clock::now();
    const double y = fn(inputs[i]);
    const auto t1 = clock::now();
    sink = sink + y;
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  BenchReport r;
  r.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  r.median_ms = median(ms);
  r.p95_ms = percentile(ms, 0.95);
  r.input_count = ms.size();
  r.warmup = warmup;
  return r;
}

std::size_t parameter_bytes(const nnet::Regressor& model) { return model.parameter_count() * sizeof(double); }

std::size_t parameter_bytes(const uq::Ensemble& ensemble) {
  std::size_t total = 0;
  for (const auto& m : ensemble.members()) total += parameter_bytes(m);
  return total;
}

FrameFn mcd_frame(const nnet::Regressor& model, std::size_t samples, std::uint64_t seed) {
  uq::McdConfig cfg;
  cfg.n_samples = static_cast<int>(samples);
  cfg.validate();
  auto rng = std::make_shared<Rng>(seed);
  auto m = std::make_shared<const nnet::Regressor>(model);
  return [m, cfg, rng](std::span<const double> x) { return uq::mcd_estimate(*m, x, cfg, *rng).variance; };
}

FrameFn de_frame(const uq::Ensemble& ensemble, bool parallel) {
  auto e = std::make_shared<const uq::Ensemble>(ensemble);
  if (parallel) {
    return [e](std::span<const double> x) { return uq::de_estimate_parallel(*e, x).variance; };
  }
  return [e](std::span<const double> x) { return uq::de_estimate(*e, x).variance; };
}

FrameFn ae_frame(const uq::AutoencoderScorer& scorer) {
  auto s = std::make_shared<const uq::AutoencoderScorer>(scorer);
  return [s](std::span<const double> x) { return uq::ae_score(*s, x); };
}

std::string to_csv(std::span<const BenchReport> reports) {
  std::string out = "estimator,size,mode,mean_ms,median_ms,p95_ms,param_bytes,inputs,warmup\n";
  for (const auto& r : reports) {
    out += r.estimator + "," + std::to_string(r.size) + "," + r.mode + "," + format_fixed(r.mean_ms, 6) + "," +
           format_fixed(r.median_ms, 6) + "," + format_fixed(r.p95_ms, 6) + "," + std::to_string(r.param_bytes) +
           "," + std::to_string(r.input_count) + "," + std::to_string(r.warmup) + "\n";
  }
  return out;
}

std::string serialize_bench(std::span<const BenchReport> reports) {
  nlohmann::ordered_json j;
  j["format"] = "lanewatch-bench";
  j["version"] = 1;
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    row["estimator"] = r.estimator;
    row["size"] = r.size;
    row["mode"] = r.mode;
    row["mean_ms"] = r.mean_ms;
    row["median_ms"] = r.median_ms;
    row["p95_ms"] = r.p95_ms;
    row["param_bytes"] = r.param_bytes;
    row["inputs"] = r.input_count;
    row["warmup"] = r.warmup;
    j["runs"].push_back(row);
  }
  return j.dump(2) + "\n";
}

void save_bench(std::span<const BenchReport> reports, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_bench(reports));
}

}  // namespace lanewatch::bench
