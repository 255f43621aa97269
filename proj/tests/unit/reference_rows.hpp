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

#include <array>

namespace lanewatch::testing {

// Per-TTF (Pr, Re, F3) percentages of the reference results: 3 benchmarks
// (OOD extreme, OOD moderate, mutants) x TTF 1..3 x 8 methods
// (MCD5 S32/S64/S128, DE5, DE10, DE50, autoencoder baseline, attention-map baseline).
inline constexpr const char* kReferenceMethods[8] = {"MCD5-S32", "MCD5-S64", "MCD5-S128", "DE5",
                                                     "DE10",     "DE50",     "AE",        "AttnMap"};

struct ReferenceRow {
  const char* benchmark;
  int ttf;
  std::array<int, 24> values;
};

inline constexpr std::array<ReferenceRow, 9> kReferenceRows{{
    {"ood-extreme", 1, {22, 93, 69, 19, 100, 69, 22, 93, 69, 42, 100, 87, 42, 100, 87, 100, 100, 100, 73, 100, 96, 19, 93, 65}},
    {"ood-extreme", 2, {23, 100, 73, 19, 95, 66, 20, 88, 65, 42, 100, 87, 42, 100, 87, 100, 100, 100, 73, 96, 93, 19, 95, 66}},
    {"ood-extreme", 3, {23, 96, 71, 17, 82, 59, 22, 89, 67, 43, 100, 87, 43, 100, 87, 100, 100, 100, 70, 89, 86, 19, 93, 66}},
    {"ood-moderate", 1, {31, 100, 80, 30, 98, 79, 30, 98, 79, 100, 100, 100, 100, 100, 100, 100, 100, 100, 51, 98, 89, 13, 87, 54}},
    {"ood-moderate", 2, {27, 86, 69, 26, 83, 67, 25, 81, 65, 100, 97, 97, 100, 98, 98, 100, 100, 100, 47, 91, 83, 11, 75, 47}},
    {"ood-moderate", 3, {21, 63, 51, 21, 63, 51, 20, 63, 51, 72, 70, 70, 89, 79, 79, 72, 70, 70, 33, 62, 57, 10, 62, 40}},
    {"mutants", 1, {65, 100, 94, 65, 99, 94, 65, 100, 94, 100, 100, 100, 100, 100, 100, 100, 100, 100, 77, 82, 81, 44, 99, 87}},
    {"mutants", 2, {65, 98, 93, 64, 97, 92, 64, 97, 92, 100, 96, 96, 100, 97, 97, 100, 97, 97, 61, 49, 50, 44, 97, 86}},
    {"mutants", 3, {60, 88, 84, 59, 85, 81, 59, 87, 83, 100, 81, 82, 100, 87, 87, 94, 81, 82, 56, 41, 41, 41, 91, 80}},
}};

}  // namespace lanewatch::testing
