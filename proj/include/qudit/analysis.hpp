// Copyright 2026 The Qudit Pulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string_view>

#include "qudit/types.hpp"

namespace qudit {

enum class FitModel { linear, quadratic };

std::string_view to_string(FitModel model);
FitModel parse_fit_model(std::string_view name);

struct DurationPoint {
  double d = 0.0;
  double T = 0.0;  // ns
};

/// T(d) = a d^2 + b d + c; `a` is zero for the linear model.
struct FitResult {
  FitModel model = FitModel::linear;
  double a = 0.0, b = 0.0, c = 0.0;
  double se_a = 0.0, se_b = 0.0, se_c = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;  // SS_tot == 0, R^2 reported as 1
  int num_points = 0;
};

/// Ordinary least squares with standard errors from s^2 (X^T X)^{-1},
/// s^2 = SS_res / (n - p). Needs at least p + 1 points with distinct d.
FitResult fit(std::span<const DurationPoint> points, FitModel model);

double evaluate_fit(const FitResult& fit, double d);

}  // namespace qudit
