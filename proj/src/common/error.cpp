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

#include "lanewatch/common/error.hpp"

namespace lanewatch {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kFit: return "fit";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kTrainingDiverged: return "training-diverged";
    case ErrorKind::kLost: return "lost";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kInput: return "input";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kIntegrity: return "integrity";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kParse: return 2;
    case ErrorKind::kIo: return 3;
    case ErrorKind::kIntegrity: return 4;
    case ErrorKind::kFit:
    case ErrorKind::kTrainingDiverged: return 5;
    case ErrorKind::kInsufficientData: return 6;
    default: return 1;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace lanewatch
