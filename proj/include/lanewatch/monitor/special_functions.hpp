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

namespace lanewatch::monitor {

double digamma(double x);
double trigamma(double x);

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0. Series
/// expansion below x = a + 1, continued fraction above.
double regularized_gamma_p(double a, double x);

}  // namespace lanewatch::monitor
