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
#include <string>
#include <string_view>

namespace lanewatch {

/// Shortest decimal text that round-trips, never fewer than 17 significant
/// digits for non-integral values.
std::string format_double(double value);

/// Shortest text that round-trips; for labels and messages.
std::string format_short(double value);

/// Fixed notation with `digits` decimals; "NA" for NaN.
std::string format_fixed(double value, int digits);

/// Parses a double written by format_double; throws kParse on garbage.
double parse_double(std::string_view text);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace lanewatch
