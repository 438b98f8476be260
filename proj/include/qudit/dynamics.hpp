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

#include <vector>

#include "qudit/model.hpp"
#include "qudit/pulse.hpp"

namespace qudit {

struct PropagationOptions {
  int steps_per_ns = 20;
  bool store_trajectory = false;
  int workers = 1;  // column blocks propagated on separate threads
};

/// 20 steps/ns for one qudit, 40 for two.
int default_steps_per_ns(const QuditSystem& sys);

int num_time_steps(double T, int steps_per_ns);

/// Rotating-frame Hamiltonian H(t) = H_0 + sum_k p_k A_k + q_k B_k.
class Hamiltonian {
 public:
  explicit Hamiltonian(const QuditSystem& sys);

  const CMatrix& drift() const { return drift_; }
  const std::vector<ControlPair>& controls() const { return controls_; }
  int dim() const { return static_cast<int>(drift_.rows()); }

  CMatrix at(const ControlValues& c) const;

 private:
  CMatrix drift_;
  std::vector<ControlPair> controls_;
};

/// exp(-i dt H) for Hermitian H via eigendecomposition, plus the
/// divided-difference kernel of its Frechet derivative.
class StepExponential {
 public:
  StepExponential(const CMatrix& h, double dt);

  const CMatrix& unitary() const { return unitary_; }
  const CMatrix& eigenvectors() const { return vectors_; }

  /// Phi_ij = (e_i - e_j) / (l_i - l_j), e = exp(-i dt l); the derivative
  /// of the step in direction X is Q (Phi o (Q^H X Q)) Q^H.
  const CMatrix& kernel() const { return kernel_; }

 private:
  CMatrix vectors_;
  CMatrix unitary_;
  CMatrix kernel_;
};

/// Final states plus (optionally) a decimated time history.
struct Trajectory {
  std::vector<double> times;
  std::vector<CMatrix> states;
  std::vector<RVector> guard_pop;  // per stored time, per column
  CMatrix final_state;
  int num_steps = 0;
  double dt = 0.0;
};

/// Exponential-midpoint propagation of the essential basis columns.
Trajectory propagate(const QuditSystem& sys, const PulseParams& params, const PropagationOptions& opts);

/// Same scheme from arbitrary initial columns.
Trajectory propagate(const QuditSystem& sys, const PulseParams& params, const PropagationOptions& opts,
                     const CMatrix& initial);

/// 1 on full-space basis states with any qudit in a guard level.
RVector guard_mask(const QuditSystem& sys);

/// Column-averaged guard population at each stored time.
std::vector<double> guard_populations(const Trajectory& traj);

}  // namespace qudit
