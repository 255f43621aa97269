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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lanewatch/common/rng.hpp"
#include "lanewatch/nnet/regressor.hpp"

namespace lanewatch::uq {

/// Predictive mean and population variance over a set of predictions.
struct UncertaintyEstimate {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> member_predictions;
};

/// Two-pass mean and population variance, summed in the given order.
UncertaintyEstimate summarize(std::vector<double> predictions);

struct McdConfig {
  int n_samples = 32;
  /// Replaces the model's own dropout rate when set.
  std::optional<double> dropout_rate;

  void validate() const;

  static const std::vector<int>& sample_grid();
  static const std::vector<double>& rate_grid();
};

/// MC-Dropout: S stochastic passes with independent masks.
UncertaintyEstimate mcd_estimate(const nnet::Regressor& model, std::span<const double> input,
                                 const McdConfig& cfg, Rng& rng);

/// Independently initialized members sharing one architecture. Members are
/// held sorted by seed, which fixes the reduction order.
class Ensemble {
 public:
  explicit Ensemble(std::vector<nnet::Regressor> members);

  std::span<const nnet::Regressor> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t input_dim() const { return members_.front().input_dim(); }

 private:
  std::vector<nnet::Regressor> members_;
};

/// One deterministic pass per member; mean and variance across members.
UncertaintyEstimate de_estimate(const Ensemble& ensemble, std::span<const double> input);

/// Same result as de_estimate, with member passes dispatched concurrently.
UncertaintyEstimate de_estimate_parallel(const Ensemble& ensemble, std::span<const double> input);

double reconstruction_mse(std::span<const double> input, std::span<const double> reconstruction);

/// Reconstruction-error scorer over an autoencoder whose output width equals
/// its input width.
class AutoencoderScorer {
 public:
  explicit AutoencoderScorer(nnet::Regressor autoencoder);

  const nnet::Regressor& model() const { return model_; }

  static std::vector<std::size_t> default_layer_dims(std::size_t input_dim);

 private:
  nnet::Regressor model_;
};

double ae_score(const AutoencoderScorer& scorer, std::span<const double> input);

// Ensemble manifests (JSON):
//   {"format": "lanewatch-ensemble", "version": 1, "id": "de5",
//    "members": [{"file": "member_1.model", "seed": 1}, ...]}
// Member paths are relative to the manifest's directory.
struct ManifestEntry {
  std::string file;
  std::uint64_t seed = 0;
};

struct EnsembleManifest {
  std::string id;
  std::vector<ManifestEntry> members;
};

std::string serialize_manifest(const EnsembleManifest& manifest);
EnsembleManifest parse_manifest(std::string_view text);
void save_manifest(const EnsembleManifest& manifest, const std::filesystem::path& path);
EnsembleManifest load_manifest(const std::filesystem::path& path);

/// Loads every member named in the manifest; a missing file is reported with
/// the manifest entry that referenced it.
Ensemble load_ensemble(const std::filesystem::path& manifest_path);

}  // namespace lanewatch::uq
