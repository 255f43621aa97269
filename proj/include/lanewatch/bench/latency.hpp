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
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lanewatch/nnet/regressor.hpp"
#include "lanewatch/uq/estimators.hpp"

namespace lanewatch::bench {

inline constexpr std::size_t kMinMeasuredInputs = 100;

struct BenchReport {
  std::string estimator;
  std::string mode = "serial";
  std::size_t size = 0;  // N members or S samples
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t param_bytes = 0;
  std::size_t input_count = 0;
  std::size_t warmup = 0;
};

/// One estimator call on one observation.
using FrameFn = std::function<double(std::span<const double>)>;

/// Times `fn` on each input separately. The first `warmup` inputs are run
/// but not recorded; at least 100 must remain.
BenchReport measure_latency(const FrameFn& fn, std::span<const std::vector<double>> inputs,
                            std::size_t warmup);

/// Parameter count x 8 bytes.
std::size_t parameter_bytes(const nnet::Regressor& model);
std::size_t parameter_bytes(const uq::Ensemble& ensemble);

FrameFn mcd_frame(const nnet::Regressor& model, std::size_t samples, std::uint64_t seed);
FrameFn de_frame(const uq::Ensemble& ensemble, bool parallel);
FrameFn ae_frame(const uq::AutoencoderScorer& scorer);

double median(std::vector<double> xs);
/// Nearest-rank percentile, q in (0, 1].
double percentile(std::vector<double> xs, double q);

std::string to_csv(std::span<const BenchReport> reports);
std::string serialize_bench(std::span<const BenchReport> reports);
void save_bench(std::span<const BenchReport> reports, const std::filesystem::path& path);

}  // namespace lanewatch::bench
