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

#include "lanewatch/nnet/model_io.hpp"

#include <sstream>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"

namespace lanewatch::nnet {

namespace {

constexpr std::string_view kMagic = "lanewatch-regressor";
constexpr int kVersion = 1;

class TokenReader {
 public:
  explicit TokenReader(std::string_view text) : in_(std::string(text)) {}

  std::string word(std::string_view what) {
    std::string tok;
    if (!(in_ >> tok)) fail(ErrorKind::kParse, "model file truncated while reading " + std::string(what));
    return tok;
  }

  void expect(std::string_view keyword) {
    const std::string tok = word(keyword);
    if (tok != keyword) {
      fail(ErrorKind::kParse, "expected '" + std::string(keyword) + "', found '" + tok + "'");
    }
  }

  std::size_t count(std::string_view what) {
    const std::string tok = word(what);
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      fail(ErrorKind::kParse, "bad integer for " + std::string(what) + ": '" + tok + "'");
    }
  }

  double number(std::string_view what) { return parse_double(word(what)); }

  std::string rest_line() {
    std::string line;
    std::getline(in_, line);
    return line;
  }

 private:
  std::istringstream in_;
};

}  // namespace

std::string serialize_regressor(const Regressor& model) {
  std::string out;
  out += std::string(kMagic) + " " + std::to_string(kVersion) + "\n";
  out += "layer_dims";
  for (std::size_t d : model.layer_dims()) out += " " + std::to_string(d);
  out += "\n";
  out += "dropout_rate " + format_double(model.dropout_rate()) + "\n";
  out += "seed " + std::to_string(model.seed()) + "\n";
  const auto layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    out += "layer " + std::to_string(l) + " " + std::to_string(layer.outputs) + " " +
           std::to_string(layer.inputs) + "\n";
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        if (i) out += ' ';
        out += format_double(layer.weight(o, i));
      }
      out += '\n';
    }
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (o) out += ' ';
      out += format_double(layer.biases[o]);
    }
    out += '\n';
  }
  return out;
}

Regressor deserialize_regressor(std::string_view text) {
  TokenReader in(text);
  in.expect(kMagic);
  const std::size_t version = in.count("version");
  if (version != kVersion) {
    fail(ErrorKind::kParse, "unsupported model file version " + std::to_string(version));
  }
  in.expect("layer_dims");
  std::vector<std::size_t> dims;
  {
    std::istringstream line(in.rest_line());
    std::size_t d = 0;
    while (line >> d) dims.push_back(d);
  }
  in.expect("dropout_rate");
  const double rate = in.number("dropout_rate");
  in.expect("seed");
  const std::uint64_t seed = in.count("seed");
  if (dims.size() < 2) fail(ErrorKind::kShape, "model file lists fewer than two layer sizes");

  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    in.expect("layer");
    if (in.count("layer index") != l) fail(ErrorKind::kParse, "layers out of order");
    DenseLayer layer;
    layer.outputs = in.count("rows");
    layer.inputs = in.count("cols");
    if (layer.outputs != dims[l + 1] || layer.inputs != dims[l]) {
      fail(ErrorKind::kShape, "layer " + std::to_string(l) + " header disagrees with layer_dims");
    }
    layer.weights.resize(layer.outputs * layer.inputs);
    for (double& w : layer.weights) w = in.number("weight");
    layer.biases.resize(layer.outputs);
    for (double& b : layer.biases) b = in.number("bias");
    layers.push_back(std::move(layer));
  }
  return RegressorBuilder::assemble(std::move(dims), rate, seed, std::move(layers));
}

void save_regressor(const Regressor& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_regressor(model));
}

Regressor load_regressor(const std::filesystem::path& path) {
  return deserialize_regressor(read_file(path));
}

}  // namespace lanewatch::nnet
