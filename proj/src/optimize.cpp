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

#include "qudit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace qudit {

int default_max_iter(const QuditSystem& sys) { return sys.num_qudits == 1 ? 500 : 1000; }

namespace {

struct CurvaturePair {
  RVector s;
  RVector y;
  double rho;
};

class Box {
 public:
  explicit Box(const PulseParams& shape) : bound_(shape.alpha_max), pinned_(shape.size()) {
    for (Eigen::Index i = 0; i < shape.size(); ++i) pinned_[i] = shape.is_pinned(i);
  }

  RVector project(const RVector& x) const {
    RVector out = x.cwiseMax(-bound_).cwiseMin(bound_);
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (pinned_[i]) out[i] = 0.0;
    return out;
  }

  // Coordinates the line search may move: not pinned and not held at a
  // bound by the gradient.
  std::vector<bool> free_set(const RVector& x, const RVector& g) const {
    std::vector<bool> free(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      free[i] = !pinned_[i] && !(x[i] <= -bound_ && g[i] > 0) && !(x[i] >= bound_ && g[i] < 0);
    return free;
  }

  double projected_gradient_norm(const RVector& x, const RVector& g) const {
    return (x - project(x - g)).lpNorm<Eigen::Infinity>();
  }

  double bound() const { return bound_; }

 private:
  double bound_;
  std::vector<bool> pinned_;
};

RVector masked(const RVector& v, const std::vector<bool>& mask) {
  RVector out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (!mask[i]) out[i] = 0.0;
  return out;
}

RVector lbfgs_direction(const RVector& g, const std::deque<CurvaturePair>& memory) {
  RVector q = g;
  std::vector<double> a(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    a[i] = memory[i].rho * memory[i].s.dot(q);
    q -= a[i] * memory[i].y;
  }
  const auto& last = memory.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double b = memory[i].rho * memory[i].y.dot(q);
    q += (a[i] - b) * memory[i].s;
  }
  return -q;
}

}  // namespace

OptResult minimize(const ObjectiveProblem& problem, const PulseParams& initial, const OptimizerConfig& cfg) {
  if (cfg.max_iter < 1) throw InvalidArgument("minimize: max_iter must be at least 1");
  initial.validate();
  const double threshold = problem.config().error_threshold;
  const Box box(initial);

  PulseParams current = initial;
  current.alpha = box.project(initial.alpha);
  ObjectiveValue value;
  RVector grad = problem.gradient(current, cfg.gradient, &value);
  auto check_finite = [](const ObjectiveValue& v, const RVector& g) {
    if (!std::isfinite(v.total) || !g.allFinite()) throw NumericError("minimize: non-finite objective or gradient");
  };
  check_finite(value, grad);

  OptResult result;
  result.objective_history.push_back(value.total);
  auto finish = [&](bool converged) {
    result.alpha_final = current.alpha;
    result.fidelity = 1.0 - value.infidelity;
    result.guard = value.guard;
    result.converged = converged;
    return result;
  };
  if (value.infidelity < threshold) return finish(true);

  auto steepest = [&](const std::vector<bool>& free) {
    RVector d = -masked(grad, free);
    const double scale = d.lpNorm<Eigen::Infinity>();
    if (scale > 0) d *= cfg.initial_step * box.bound() / scale;
    return d;
  };

  std::deque<CurvaturePair> memory;
  while (result.iterations < cfg.max_iter) {
    if (box.projected_gradient_norm(current.alpha, grad) < cfg.projected_gradient_tol) break;
    const auto free = box.free_set(current.alpha, grad);

    RVector direction = memory.empty() ? steepest(free) : masked(lbfgs_direction(masked(grad, free), memory), free);
    if (grad.dot(direction) >= 0) {
      memory.clear();
      direction = steepest(free);
    }

    PulseParams trial = current;
    ObjectiveValue trial_value;
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, step *= cfg.shrink) {
      trial.alpha = box.project(current.alpha + step * direction);
      const RVector moved = trial.alpha - current.alpha;
      if (moved.lpNorm<Eigen::Infinity>() == 0.0) break;
      trial_value = problem.value(trial);
      if (!std::isfinite(trial_value.total)) throw NumericError("minimize: non-finite objective");
      if (trial_value.total <= value.total + cfg.armijo_c * grad.dot(moved)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (memory.empty()) break;  // steepest descent also failed
      memory.clear();
      continue;
    }

    const RVector new_grad = problem.gradient(trial, cfg.gradient, &trial_value);
    check_finite(trial_value, new_grad);
    const RVector s = trial.alpha - current.alpha;
    const RVector y = new_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > cfg.history) memory.pop_front();
    }

    current = std::move(trial);
    grad = new_grad;
    value = trial_value;
    ++result.iterations;
    result.objective_history.push_back(value.total);
    if (cfg.on_iteration) cfg.on_iteration({result.iterations, value.total, value.infidelity, value.guard, step});
    if (value.infidelity < threshold) return finish(true);
  }
  return finish(false);
}

OptResult minimize(const QuditSystem& sys, const PulseParams& initial, const GateSpec& target,
                   const ObjectiveConfig& objective_cfg, const OptimizerConfig& cfg, int steps_per_ns) {
  return minimize(ObjectiveProblem(sys, target, objective_cfg, steps_per_ns), initial, cfg);
}

}  // namespace qudit
