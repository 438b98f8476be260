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

#include "qudit/dynamics.hpp"

namespace qudit {

struct ObjectiveConfig {
  double w_guard = 0.1;
  double w_l2 = 0.0;
  double error_threshold = 1e-3;

  void validate() const;
};

/// 1 - |<V, U>_F|^2 / h^2.
double trace_infidelity(const CMatrix& final_states, const CMatrix& target_embedded, int h);

/// Time average of the column-mean guard population, trapezoid rule on
/// the stored grid.
double guard_penalty(const Trajectory& traj);

struct ObjectiveValue {
  double total = 0.0;
  double infidelity = 0.0;
  double guard = 0.0;
  double l2 = 0.0;  // ||alpha||^2, unweighted
};

enum class GradientMethod { adjoint, finite_difference };

/// Objective and gradient for a fixed target and integrator. The guard
/// penalty here is evaluated on every integrator step, so the adjoint
/// gradient is exact for the discrete objective.
class ObjectiveProblem {
 public:
  ObjectiveProblem(QuditSystem sys, const GateSpec& target, ObjectiveConfig cfg, int steps_per_ns);

  ObjectiveValue value(const PulseParams& params) const;

  /// Discrete adjoint gradient; pinned coordinates are zero.
  RVector gradient(const PulseParams& params, ObjectiveValue* value_out = nullptr) const;

  /// Central differences with step 1e-6 * alpha_max per coordinate.
  RVector gradient_fd(const PulseParams& params) const;

  RVector gradient(const PulseParams& params, GradientMethod method, ObjectiveValue* value_out = nullptr) const;

  const QuditSystem& system() const { return sys_; }
  const ObjectiveConfig& config() const { return cfg_; }
  const CMatrix& target() const { return target_; }
  int steps_per_ns() const { return steps_per_ns_; }

 private:
  struct Forward {
    ObjectiveValue value;
    CMatrix final_state;
  };
  Forward forward(const PulseParams& params) const;

  QuditSystem sys_;
  CMatrix target_;
  ObjectiveConfig cfg_;
  int steps_per_ns_;
  Hamiltonian ham_;
  RVector mask_;
};

double objective(const QuditSystem& sys, const PulseParams& params, const GateSpec& target,
                 const ObjectiveConfig& cfg, int steps_per_ns);

RVector gradient(const QuditSystem& sys, const PulseParams& params, const GateSpec& target,
                 const ObjectiveConfig& cfg, int steps_per_ns);

}  // namespace qudit
