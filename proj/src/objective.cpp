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

#include "qudit/objective.hpp"

#include <algorithm>
#include <cmath>

namespace qudit {

void ObjectiveConfig::validate() const {
  if (!(w_guard >= 0) || !(w_l2 >= 0)) throw InvalidArgument("objective: weights must be non-negative");
  if (!(error_threshold > 0 && error_threshold < 1)) throw InvalidArgument("objective: error_threshold must be in (0, 1)");
}

double trace_infidelity(const CMatrix& final_states, const CMatrix& target_embedded, int h) {
  if (final_states.rows() != target_embedded.rows() || final_states.cols() != target_embedded.cols())
    throw InvalidArgument("trace_infidelity: shape mismatch");
  if (h <= 0) throw InvalidArgument("trace_infidelity: h must be positive");
  const Complex overlap = (target_embedded.conjugate().cwiseProduct(final_states)).sum();
  return std::clamp(1.0 - std::norm(overlap) / (static_cast<double>(h) * h), 0.0, 1.0);
}

double guard_penalty(const Trajectory& traj) {
  const auto pop = guard_populations(traj);
  if (pop.size() < 2) return pop.empty() ? 0.0 : pop.front();
  double integral = 0.0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    integral += 0.5 * (pop[i] + pop[i - 1]) * (traj.times[i] - traj.times[i - 1]);
  const double span = traj.times.back() - traj.times.front();
  return span > 0 ? std::clamp(integral / span, 0.0, 1.0) : 0.0;
}

ObjectiveProblem::ObjectiveProblem(QuditSystem sys, const GateSpec& target, ObjectiveConfig cfg, int steps_per_ns)
    : sys_(std::move(sys)),
      target_(embed_target(target, sys_)),
      cfg_(cfg),
      steps_per_ns_(steps_per_ns),
      ham_(sys_),
      mask_(guard_mask(sys_)) {
  cfg_.validate();
  if (steps_per_ns < 1) throw InvalidArgument("objective: steps_per_ns must be at least 1");
}

namespace {

void check_shape(const QuditSystem& sys, const PulseParams& params) {
  if (params.num_controls() != sys.num_qudits || params.alpha.size() != params.size() || !(params.T > 0))
    throw InvalidArgument("objective: pulse does not match the system");
  if (!params.alpha.allFinite()) throw NumericError("objective: non-finite coefficients");
}

double column_mean_guard(const CMatrix& states, const RVector& mask) {
  return (mask.asDiagonal() * states.cwiseAbs2()).sum() / static_cast<double>(states.cols());
}

}  // namespace

ObjectiveProblem::Forward ObjectiveProblem::forward(const PulseParams& params) const {
  const int steps = num_time_steps(params.T, steps_per_ns_);
  const double dt = params.T / steps;
  const int h = sys_.essential_dim();

  CMatrix psi = embed_target(GateSpec{"I", h, CMatrix::Identity(h, h)}, sys_);
  double guard_integral = 0.5 * dt * column_mean_guard(psi, mask_);
  for (int m = 1; m <= steps; ++m) {
    const StepExponential step(ham_.at(eval_controls(params, (m - 0.5) * dt)), dt);
    psi = step.unitary() * psi;
    guard_integral += (m == steps ? 0.5 : 1.0) * dt * column_mean_guard(psi, mask_);
  }

  Forward out;
  out.value.infidelity = trace_infidelity(psi, target_, h);
  out.value.guard = guard_integral / params.T;
  out.value.l2 = params.alpha.squaredNorm();
  out.value.total = out.value.infidelity + cfg_.w_guard * out.value.guard + cfg_.w_l2 * out.value.l2;
  if (!std::isfinite(out.value.total)) throw NumericError("objective: non-finite value");
  out.final_state = std::move(psi);
  return out;
}

ObjectiveValue ObjectiveProblem::value(const PulseParams& params) const {
  check_shape(sys_, params);
  return forward(params).value;
}

RVector ObjectiveProblem::gradient(const PulseParams& params, ObjectiveValue* value_out) const {
  check_shape(sys_, params);
  const int steps = num_time_steps(params.T, steps_per_ns_);
  const double dt = params.T / steps;
  const int h = sys_.essential_dim();
  const QuadraticBSplines basis(params.num_splines, params.T);

  // Forward sweep keeps only the final state; earlier states are
  // recovered on the way back via psi_{m-1} = W_m^H psi_m.
  const auto fwd = forward(params);
  const ObjectiveValue& v = fwd.value;
  CMatrix psi = fwd.final_state;
  if (value_out) *value_out = v;

  // d(guard term)/d psi_m = guard_scale * w_m * P psi_m, with trapezoid weight w_m.
  const double guard_scale = cfg_.w_guard * 2.0 / (static_cast<double>(h) * params.T);
  const Complex overlap = (target_.conjugate().cwiseProduct(psi)).sum();
  CMatrix adjoint = (-2.0 / (static_cast<double>(h) * h)) * overlap * target_;
  adjoint += (guard_scale * 0.5 * dt) * (mask_.asDiagonal() * psi);

  RVector grad = RVector::Zero(params.size());
  const auto& ops = ham_.controls();
  const int nc = params.num_controls();
  const int nf = params.num_carriers();

  for (int m = steps; m >= 1; --m) {
    const double t_mid = (m - 0.5) * dt;
    const StepExponential step(ham_.at(eval_controls(params, t_mid)), dt);
    const CMatrix& q = step.eigenvectors();
    const CMatrix psi_prev = step.unitary().adjoint() * psi;

    // tr(Z^H dW psi) = sum_ij (Phi o X~)_ij M_ji with M = Q^H psi Z^H Q.
    const CMatrix m_mat = q.adjoint() * psi_prev * adjoint.adjoint() * q;
    const CMatrix weights = step.kernel().cwiseProduct(m_mat.transpose());

    const auto loc = basis.local(t_mid);
    for (int k = 0; k < nc; ++k) {
      const double g_sym = (weights.cwiseProduct(q.adjoint() * ops[k].symmetric * q)).sum().real();
      const double g_anti = (weights.cwiseProduct(q.adjoint() * ops[k].antisymmetric * q)).sum().real();
      for (int j = 0; j < nf; ++j) {
        const double c = std::cos(params.carriers[k][j] * t_mid);
        const double s = std::sin(params.carriers[k][j] * t_mid);
        for (int i = 0; i < 3; ++i) {
          const int b = loc.first + i;
          const double sb = loc.values[i];
          // dp/d(re) = S c, dq/d(re) = S s, dp/d(im) = -S s, dq/d(im) = S c.
          grad[params.index(k, j, b, 0)] += sb * (c * g_sym + s * g_anti);
          grad[params.index(k, j, b, 1)] += sb * (-s * g_sym + c * g_anti);
        }
      }
    }

    const double w_prev = (m - 1 == 0) ? 0.5 * dt : dt;
    adjoint = step.unitary().adjoint() * adjoint;
    adjoint += (guard_scale * w_prev) * (mask_.asDiagonal() * psi_prev);
    psi = psi_prev;
  }

  grad += 2.0 * cfg_.w_l2 * params.alpha;
  for (Eigen::Index i = 0; i < grad.size(); ++i)
    if (params.is_pinned(i)) grad[i] = 0.0;
  if (!grad.allFinite()) throw NumericError("objective: non-finite gradient");
  return grad;
}

RVector ObjectiveProblem::gradient_fd(const PulseParams& params) const {
  check_shape(sys_, params);
  const double h = 1e-6 * params.alpha_max;
  RVector grad = RVector::Zero(params.size());
  PulseParams probe = params;
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    if (params.is_pinned(i)) continue;
    probe.alpha[i] = params.alpha[i] + h;
    const double up = value(probe).total;
    probe.alpha[i] = params.alpha[i] - h;
    const double down = value(probe).total;
    probe.alpha[i] = params.alpha[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

RVector ObjectiveProblem::gradient(const PulseParams& params, GradientMethod method, ObjectiveValue* value_out) const {
  if (method == GradientMethod::adjoint) return gradient(params, value_out);
  if (value_out) *value_out = value(params);
  return gradient_fd(params);
}

double objective(const QuditSystem& sys, const PulseParams& params, const GateSpec& target,
                 const ObjectiveConfig& cfg, int steps_per_ns) {
  return ObjectiveProblem(sys, target, cfg, steps_per_ns).value(params).total;
}

RVector gradient(const QuditSystem& sys, const PulseParams& params, const GateSpec& target,
                 const ObjectiveConfig& cfg, int steps_per_ns) {
  return ObjectiveProblem(sys, target, cfg, steps_per_ns).gradient(params);
}

}  // namespace qudit
