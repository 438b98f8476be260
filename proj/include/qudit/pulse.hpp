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

#include <array>
#include <cstdint>
#include <vector>

#include "qudit/model.hpp"

namespace qudit {

struct CarrierSet {
  std::vector<std::vector<double>> lab;  // per qudit, omega_k + j xi_k
  std::vector<std::vector<double>> rot;  // per control, shifted by omega_rot
};

CarrierSet carrier_frequencies(const QuditSystem& sys);

/// Midpoint of the highest and lowest lab-frame carrier over all qudits.
double rotating_frame_frequency(const QuditSystem& sys);

/// round-half-up(T / 10 ns) + 2.
int num_bsplines(double T);

/// Per-coefficient bound giving at most 40 MHz lab-frame amplitude.
double alpha_bound(int num_carriers);

/// Uniform quadratic B-splines on [0, T]. Basis b is centered at
/// (b - 1/2) * dt with dt = T / (N_b - 2) and support 3 dt, so the
/// first and last functions straddle the interval ends.
class QuadraticBSplines {
 public:
  QuadraticBSplines(int num_splines, double duration);

  int size() const { return num_splines_; }
  double duration() const { return duration_; }
  double knot_spacing() const { return spacing_; }

  /// The three splines that may be nonzero at t: indices first..first+2.
  struct Local {
    int first;
    std::array<double, 3> values;
  };
  Local local(double t) const;

  RVector values(double t) const;

 private:
  int num_splines_;
  double duration_;
  double spacing_;
};

RVector basis_values(int num_splines, double T, double t);

/// Carrier-wave/B-spline control pulse. `alpha` holds real and imaginary
/// parts interleaved, index ((k * N_f + j) * N_b + b) * 2 + c.
struct PulseParams {
  double T = 0.0;
  std::vector<std::vector<double>> carriers;  // rotating frame, per control
  int num_splines = 0;
  RVector alpha;
  double alpha_max = 0.0;

  int num_controls() const { return static_cast<int>(carriers.size()); }
  int num_carriers() const { return carriers.empty() ? 0 : static_cast<int>(carriers.front().size()); }
  Eigen::Index size() const { return 2 * Eigen::Index{num_controls()} * num_carriers() * num_splines; }
  Eigen::Index index(int k, int j, int b, int c) const {
    return ((Eigen::Index{k} * num_carriers() + j) * num_splines + b) * 2 + c;
  }
  bool is_pinned(Eigen::Index i) const {
    const auto b = (i / 2) % num_splines;
    return b == 0 || b == num_splines - 1;
  }
  /// Checks shapes, bounds and boundary pinning.
  void validate() const;
};

/// Zero pulse of duration T with default carriers, N_b and bound.
PulseParams make_pulse(const QuditSystem& sys, double T);

/// Same carriers and bound, new duration and spline count, zero alpha.
PulseParams reshape_pulse(const PulseParams& params, double T);

struct ControlValues {
  RVector p;
  RVector q;
};

ControlValues eval_controls(const PulseParams& params, double t);

/// f_k(t) = 2 Re{(p_k + i q_k) e^{i omega_rot t}}.
RVector lab_frame_control(const PulseParams& params, double omega_rot, double t);

/// Uniform draws in +-scale * alpha_max on non-boundary coefficients.
RVector random_guess(const PulseParams& shape, double scale, std::uint64_t seed);

/// Least-squares re-parameterization onto a new duration. Each carrier
/// envelope is fit separately; the old pulse is kept up to min(T, T_new)
/// and padded with zero amplitude beyond T.
PulseParams refit(const PulseParams& params, double T_new);

}  // namespace qudit
