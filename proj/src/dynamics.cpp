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

#include "qudit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace qudit {

int default_steps_per_ns(const QuditSystem& sys) { return sys.num_qudits == 1 ? 20 : 40; }

int num_time_steps(double T, int steps_per_ns) {
  if (steps_per_ns < 1) throw InvalidArgument("propagate: steps_per_ns must be at least 1");
  return std::max(1, static_cast<int>(std::ceil(T * steps_per_ns - 1e-9)));
}

Hamiltonian::Hamiltonian(const QuditSystem& sys)
    : drift_(drift_hamiltonian(sys)), controls_(control_operators(sys)) {}

CMatrix Hamiltonian::at(const ControlValues& c) const {
  CMatrix h = drift_;
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    const double p = c.p[static_cast<Eigen::Index>(k)];
    const double q = c.q[static_cast<Eigen::Index>(k)];
    if (!std::isfinite(p) || !std::isfinite(q)) throw NumericError("propagate: non-finite control value");
    h += p * controls_[k].symmetric + q * controls_[k].antisymmetric;
  }
  return h;
}

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

StepExponential::StepExponential(const CMatrix& h, double dt) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw NumericError("propagate: eigendecomposition failed");
  const RVector& lambda = eig.eigenvalues();
  vectors_ = eig.eigenvectors();
  const Eigen::Index n = lambda.size();

  CVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::polar(1.0, -dt * lambda[i]);
  unitary_ = vectors_ * phases.asDiagonal() * vectors_.adjoint();

  // (e^{-ia} - e^{-ib}) / (l_i - l_j) written without cancellation.
  kernel_.resize(n, n);
  const Complex minus_i_dt(0.0, -dt);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mean = 0.5 * (lambda[i] + lambda[j]);
      const double half_gap = 0.5 * dt * (lambda[i] - lambda[j]);
      kernel_(i, j) = minus_i_dt * std::polar(1.0, -dt * mean) * sinc(half_gap);
    }
}

RVector guard_mask(const QuditSystem& sys) {
  RVector mask(sys.full_dim());
  for (int i = 0; i < sys.full_dim(); ++i) mask[i] = sys.is_guard_state(i) ? 1.0 : 0.0;
  return mask;
}

namespace {

RVector column_guard_pop(const CMatrix& states, const RVector& mask) {
  return (mask.asDiagonal() * states.cwiseAbs2()).colwise().sum().transpose();
}

struct Schedule {
  int steps;
  double dt;
  int stride;
  std::vector<int> stored;  // step indices kept in the trajectory
};

Schedule make_schedule(double T, const PropagationOptions& opts) {
  Schedule s;
  s.steps = num_time_steps(T, opts.steps_per_ns);
  s.dt = T / s.steps;
  s.stride = (s.steps + 999) / 1000;
  if (opts.store_trajectory) {
    for (int m = 0; m <= s.steps; m += s.stride) s.stored.push_back(m);
    if (s.stored.back() != s.steps) s.stored.push_back(s.steps);
  }
  return s;
}

// Advances one block of columns through all steps, writing stored
// snapshots into its own column range of `snapshots`.
void run_block(const Hamiltonian& ham, const PulseParams& params, const Schedule& sched, CMatrix block,
               Eigen::Index col0, std::vector<CMatrix>& snapshots, CMatrix& final_state) {
  std::size_t next = 0;
  auto snapshot = [&](int m) {
    if (next < sched.stored.size() && sched.stored[next] == m) {
      snapshots[next].middleCols(col0, block.cols()) = block;
      ++next;
    }
  };
  snapshot(0);
  for (int m = 1; m <= sched.steps; ++m) {
    const double t_mid = (m - 0.5) * sched.dt;
    const StepExponential step(ham.at(eval_controls(params, t_mid)), sched.dt);
    // Column-wise products keep results independent of the block split.
    for (Eigen::Index c = 0; c < block.cols(); ++c) block.col(c) = step.unitary() * block.col(c);
    snapshot(m);
  }
  final_state.middleCols(col0, block.cols()) = block;
}

}  // namespace

Trajectory propagate(const QuditSystem& sys, const PulseParams& params, const PropagationOptions& opts) {
  sys.validate();
  const CMatrix initial = embed_target(GateSpec{"I", sys.essential_dim(),
                                                CMatrix::Identity(sys.essential_dim(), sys.essential_dim())},
                                       sys);
  return propagate(sys, params, opts, initial);
}

Trajectory propagate(const QuditSystem& sys, const PulseParams& params, const PropagationOptions& opts,
                     const CMatrix& initial) {
  sys.validate();
  params.validate();
  if (params.num_controls() != sys.num_qudits) throw InvalidArgument("propagate: one control per qudit expected");
  if (initial.rows() != sys.full_dim()) throw InvalidArgument("propagate: initial state has the wrong dimension");

  const Hamiltonian ham(sys);
  const Schedule sched = make_schedule(params.T, opts);
  const Eigen::Index cols = initial.cols();

  Trajectory traj;
  traj.num_steps = sched.steps;
  traj.dt = sched.dt;
  traj.final_state.resize(initial.rows(), cols);
  traj.states.assign(sched.stored.size(), CMatrix(initial.rows(), cols));

  const int workers = std::clamp<int>(opts.workers, 1, static_cast<int>(std::max<Eigen::Index>(cols, 1)));
  if (workers == 1) {
    run_block(ham, params, sched, initial, 0, traj.states, traj.final_state);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const Eigen::Index chunk = (cols + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const Eigen::Index c0 = w * chunk;
      const Eigen::Index width = std::min(chunk, cols - c0);
      if (width <= 0) break;
      pool.emplace_back([&, w, c0, width] {
        try {
          run_block(ham, params, sched, initial.middleCols(c0, width), c0, traj.states, traj.final_state);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const RVector mask = guard_mask(sys);
  for (std::size_t i = 0; i < sched.stored.size(); ++i) {
    traj.times.push_back(sched.stored[i] * sched.dt);
    traj.guard_pop.push_back(column_guard_pop(traj.states[i], mask));
  }
  return traj;
}

std::vector<double> guard_populations(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.guard_pop.size());
  for (const auto& per_column : traj.guard_pop)
    out.push_back(per_column.size() == 0 ? 0.0 : per_column.mean());
  return out;
}

}  // namespace qudit
