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

#include "lanewatch/uq/estimators.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>
#include <tbb/parallel_for.h>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/nnet/model_io.hpp"

namespace lanewatch::uq {

UncertaintyEstimate summarize(std::vector<double> predictions) {
  require(!predictions.empty(), ErrorKind::kInsufficientData, "no predictions to summarize");
  const double n = static_cast<double>(predictions.size());
  double sum = 0.0;
  for (double p : predictions) sum += p;
  const double mean = sum / n;
  double ss = 0.0;
  for (double p : predictions) ss += (p - mean) * (p - mean);
  return {mean, ss / n, std::move(predictions)};
}

void McdConfig::validate() const {
  require(n_samples >= 1, ErrorKind::kConfig, "MC-Dropout needs at least one sample");
  if (dropout_rate) nnet::validate_mask_rate(*dropout_rate);
}

const std::vector<int>& McdConfig::sample_grid() {
  static const std::vector<int> grid{2, 3, 4, 5, 10, 20, 32, 64, 128};
  return grid;
}

const std::vector<double>& McdConfig::rate_grid() {
  static const std::vector<double> grid{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35};
  return grid;
}

UncertaintyEstimate mcd_estimate(const nnet::Regressor& model, std::span<const double> input,
                                 const McdConfig& cfg, Rng& rng) {
  cfg.validate();
  const double rate = cfg.dropout_rate.value_or(model.dropout_rate());
  std::vector<double> outputs;
  outputs.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (int s = 0; s < cfg.n_samples; ++s) outputs.push_back(model.forward(input, rate, rng).front());
  return summarize(std::move(outputs));
}

Ensemble::Ensemble(std::vector<nnet::Regressor> members) : members_(std::move(members)) {
  require(members_.size() >= 2, ErrorKind::kConfig,
          "an ensemble needs at least two members, got " + std::to_string(members_.size()));
  std::set<std::uint64_t> seeds;
  for (const auto& m : members_) {
    require(m.layer_dims() == members_.front().layer_dims(), ErrorKind::kShape,
            "ensemble members must share one architecture");
    require(seeds.insert(m.seed()).second, ErrorKind::kConfig,
            "ensemble member seed " + std::to_string(m.seed()) + " is duplicated");
  }
  std::sort(members_.begin(), members_.end(),
            [](const nnet::Regressor& a, const nnet::Regressor& b) { return a.seed() < b.seed(); });
}

UncertaintyEstimate de_estimate(const Ensemble& ensemble, std::span<const double> input) {
  std::vector<double> outputs;
  outputs.reserve(ensemble.size());
  for (const auto& m : ensemble.members()) outputs.push_back(m.forward(input).front());
  return summarize(std::move(outputs));
}

UncertaintyEstimate de_estimate_parallel(const Ensemble& ensemble, std::span<const double> input) {
  std::vector<double> outputs(ensemble.size());
  const auto members = ensemble.members();
  tbb::parallel_for(std::size_t{0}, members.size(),
                    [&](std::size_t k) { outputs[k] = members[k].forward(input).front(); });
  return summarize(std::move(outputs));
}

double reconstruction_mse(std::span<const double> input, std::span<const double> reconstruction) {
  require(input.size() == reconstruction.size() && !input.empty(), ErrorKind::kShape,
          "input and reconstruction differ in width");
  double s = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double r = input[i] - reconstruction[i];
    s += r * r;
  }
  return s / static_cast<double>(input.size());
}

AutoencoderScorer::AutoencoderScorer(nnet::Regressor autoencoder) : model_(std::move(autoencoder)) {
  require(model_.input_dim() == model_.output_dim(), ErrorKind::kShape,
          "autoencoder output width must equal its input width");
}

std::vector<std::size_t> AutoencoderScorer::default_layer_dims(std::size_t input_dim) {
  return {input_dim, 4, 2, 4, input_dim};
}

double ae_score(const AutoencoderScorer& scorer, std::span<const double> input) {
  return reconstruction_mse(input, scorer.model().forward(input));
}

std::string serialize_manifest(const EnsembleManifest& manifest) {
  nlohmann::ordered_json j;
  j["format"] = "lanewatch-ensemble";
  j["version"] = 1;
  j["id"] = manifest.id;
  j["members"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.members) {
    nlohmann::ordered_json m;
    m["file"] = e.file;
    m["seed"] = e.seed;
    j["members"].push_back(m);
  }
  return j.dump(2) + "\n";
}

EnsembleManifest parse_manifest(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("ensemble manifest: ") + e.what());
  }
  if (j.value("format", "") != "lanewatch-ensemble" || j.value("version", 0) != 1) {
    fail(ErrorKind::kParse, "not a version-1 ensemble manifest");
  }
  EnsembleManifest out;
  out.id = j.value("id", "");
  for (const auto& m : j.at("members")) {
    out.members.push_back({m.at("file").get<std::string>(), m.at("seed").get<std::uint64_t>()});
  }
  return out;
}

void save_manifest(const EnsembleManifest& manifest, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_manifest(manifest));
}

EnsembleManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path));
}

Ensemble load_ensemble(const std::filesystem::path& manifest_path) {
  const EnsembleManifest manifest = load_manifest(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::vector<nnet::Regressor> members;
  for (std::size_t k = 0; k < manifest.members.size(); ++k) {
    const auto& entry = manifest.members[k];
    const auto file = dir / entry.file;
    if (!std::filesystem::exists(file)) {
      fail(ErrorKind::kIo, "manifest " + manifest_path.string() + " member " + std::to_string(k) +
                               " (seed " + std::to_string(entry.seed) + "): missing model file " +
                               file.string());
    }
    members.push_back(nnet::load_regressor(file));
  }
  return Ensemble(std::move(members));
}

}  // namespace lanewatch::uq
