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

#include <functional>
#include <vector>

#include "qudit/objective.hpp"

namespace qudit {

struct IterationLog {
  int iteration = 0;
  double objective = 0.0;
  double infidelity = 0.0;
  double guard = 0.0;
  double step = 0.0;
};

struct OptimizerConfig {
  int max_iter = 500;
  int history = 10;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
  double projected_gradient_tol = 1e-9;
  double initial_step = 0.25;  // first steepest-descent step, |d|_inf as a fraction of alpha_max
  GradientMethod gradient = GradientMethod::adjoint;
  std::function<void(const IterationLog&)> on_iteration;
};

/// 500 iterations for one qudit, 1000 for two.
int default_max_iter(const QuditSystem& sys);

struct OptResult {
  RVector alpha_final;
  double fidelity = 0.0;
  double guard = 0.0;
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
};

/// Box-constrained L-BFGS with projected backtracking (Armijo) line search.
/// Stops once the trace infidelity drops below the error threshold, after
/// `max_iter` iterations, or when the projected gradient vanishes.
/// Returns the best iterate seen.
OptResult minimize(const ObjectiveProblem& problem, const PulseParams& initial, const OptimizerConfig& cfg);

OptResult minimize(const QuditSystem& sys, const PulseParams& initial, const GateSpec& target,
                   const ObjectiveConfig& objective_cfg, const OptimizerConfig& cfg, int steps_per_ns);

}  // namespace qudit
