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

#include <filesystem>
#include <string>
#include <string_view>

#include "lanewatch/nnet/regressor.hpp"

namespace lanewatch::nnet {

// Text model format, version 1:
//
//   lanewatch-regressor 1
//   layer_dims 9 32 16 1
//   dropout_rate 0.050000000000000003
//   seed 7
//   layer 0 32 9
//   <32 lines of 9 weights>
//   <1 line of 32 biases>
//   layer 1 ...
//
// Numbers use 17 significant digits so parameters round-trip exactly.

std::string serialize_regressor(const Regressor& model);
Regressor deserialize_regressor(std::string_view text);

void save_regressor(const Regressor& model, const std::filesystem::path& path);
Regressor load_regressor(const std::filesystem::path& path);

}  // namespace lanewatch::nnet
