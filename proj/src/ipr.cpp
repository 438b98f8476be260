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

#include "qudit/ipr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace qudit {

std::string_view to_string(SeedKind kind) {
  switch (kind) {
    case SeedKind::random:
      return "random";
    case SeedKind::truncated:
      return "truncated";
    case SeedKind::extended:
      return "extended";
  }
  return "unknown";
}

void IPRConfig::validate() const {
  if (!(T_start > 0)) throw InvalidArgument("ipr: T_start must be positive");
  if (!(granularity > 0)) throw InvalidArgument("ipr: granularity must be positive");
  if (step > 0 && step < granularity) throw InvalidArgument("ipr: step must be at least the granularity");
  if (max_restarts < 0 || max_attempts < 1) throw InvalidArgument("ipr: invalid attempt budget");
  if (!(error_threshold > 0 && error_threshold < 1)) throw InvalidArgument("ipr: error_threshold must be in (0, 1)");
  if (!(guess_scale >= 0)) throw InvalidArgument("ipr: guess_scale must be non-negative");
}

double default_step(double T_start) {
  if (!(T_start > 0)) throw InvalidArgument("default_step: T_start must be positive");
  return std::exp2(std::round(std::log2(0.1 * T_start)));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GradientDurationOptimizer::GradientDurationOptimizer(QuditSystem sys, GateSpec target, ObjectiveConfig objective_cfg,
                                                     OptimizerConfig optimizer_cfg, int steps_per_ns)
    : problem_(std::move(sys), target, objective_cfg, steps_per_ns), cfg_(std::move(optimizer_cfg)) {}

OptResult GradientDurationOptimizer::optimize(const PulseParams& seed) { return minimize(problem_, seed, cfg_); }

OptResult ThresholdMockOptimizer::optimize(const PulseParams& seed) {
  ++calls_;
  OptResult r;
  r.alpha_final = seed.alpha;
  r.iterations = 1;
  r.fidelity = seed.T >= threshold_ ? 1.0 - 0.5 * error_threshold_
                                    : (1.0 - 2.0 * error_threshold_) * std::exp(-(threshold_ - seed.T) / threshold_);
  r.converged = seed.T >= threshold_;
  return r;
}

OptResult FunctionMockOptimizer::optimize(const PulseParams& seed) {
  OptResult r;
  r.alpha_final = seed.alpha;
  r.iterations = 1;
  r.fidelity = fidelity_(seed.T);
  return r;
}

IPRResult ipr_run(const QuditSystem& sys, const IPRConfig& cfg, DurationOptimizer& optimizer) {
  cfg.validate();
  sys.validate();
  const double gran = cfg.granularity;
  double step = cfg.step > 0 ? cfg.step : std::max(default_step(cfg.T_start), gran);

  IPRResult result;
  auto random_seed_pulse = [&](double T) {
    PulseParams p = make_pulse(sys, T);
    p.alpha = random_guess(p, cfg.guess_scale, derive_seed(cfg.seed, static_cast<std::uint64_t>(result.restarts_used)));
    return p;
  };

  double T = cfg.T_start;
  PulseParams seed = random_seed_pulse(T);
  SeedKind kind = SeedKind::random;

  bool found_time = false;
  double previous_fidelity = -std::numeric_limits<double>::infinity();
  double fidelity_best_T = T;
  // Best-effort fallback when nothing succeeds.
  double top_fidelity = -1.0;
  PulseParams top_pulse;
  double top_T = T;

  // Next duration below T_best; halves the step while it would undercut
  // the granularity floor. Returns false when no such duration exists.
  auto step_down = [&]() {
    while (result.T_best - step < gran) {
      if (step / 2 < gran) return false;
      step /= 2;
    }
    T = result.T_best - step;
    seed = refit(result.pulse_best, T);
    kind = SeedKind::truncated;
    return true;
  };

  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    const OptResult opt = optimizer.optimize(seed);
    PulseParams optimized = seed;
    optimized.alpha = opt.alpha_final;
    const double fidelity = opt.fidelity;
    const bool success = fidelity >= 1.0 - cfg.error_threshold;
    result.records.push_back({attempt, T, fidelity, success, kind, step});

    if (success) {
      found_time = true;
      result.T_best = T;
      result.pulse_best = optimized;
      result.fidelity_best = fidelity;
      if (!step_down()) break;
      continue;
    }

    if (found_time) {
      if (step / 2 < gran) break;
      step /= 2;
      if (!step_down()) break;
      continue;
    }

    if (fidelity > top_fidelity) {
      top_fidelity = fidelity;
      top_pulse = optimized;
      top_T = T;
    }

    if (fidelity > previous_fidelity) {
      previous_fidelity = fidelity;
      fidelity_best_T = T;
      T += step;
      seed = refit(optimized, T);
      kind = SeedKind::extended;
      continue;
    }

    if (result.restarts_used >= cfg.max_restarts) break;
    ++result.restarts_used;
    previous_fidelity = -std::numeric_limits<double>::infinity();
    T = fidelity_best_T;
    seed = random_seed_pulse(T);
    kind = SeedKind::random;
  }

  result.found = found_time;
  if (!found_time) {
    result.T_best = top_T;
    result.pulse_best = top_pulse;
    result.fidelity_best = std::max(top_fidelity, 0.0);
  }
  return result;
}

DurationSummary summarize(const std::vector<RunOutcome>& runs) {
  DurationSummary s;
  std::vector<double> durations;
  for (const auto& r : runs)
    if (r.error.empty() && r.result.found) {
      durations.push_back(r.result.T_best);
      s.best_fidelity = std::max(s.best_fidelity, r.result.fidelity_best);
    }
  s.successes = static_cast<int>(durations.size());
  if (durations.empty()) return s;
  s.min = *std::min_element(durations.begin(), durations.end());
  double sum = 0.0;
  for (double t : durations) sum += t;
  s.mean = sum / durations.size();
  if (durations.size() > 1) {
    double ss = 0.0;
    for (double t : durations) ss += (t - s.mean) * (t - s.mean);
    s.stddev = std::sqrt(ss / (durations.size() - 1));
  }
  return s;
}

MultiRunResult multi_run(const QuditSystem& sys, const IPRConfig& base, const OptimizerFactory& factory,
                         const MultiRunConfig& cfg) {
  if (cfg.n_runs < 1) throw InvalidArgument("multi_run: n_runs must be at least 1");
  if (!(cfg.sample_low > 0 && cfg.sample_low <= cfg.sample_high))
    throw InvalidArgument("multi_run: invalid sampling interval");
  base.validate();

  MultiRunResult out;
  out.T_ref = cfg.T_ref;
  if (!(out.T_ref > 0)) {
    auto pilot_optimizer = factory();
    out.T_ref = ipr_run(sys, base, *pilot_optimizer).T_best;
  }

  out.runs.resize(cfg.n_runs);
  for (int r = 0; r < cfg.n_runs; ++r) {
    RunOutcome& run = out.runs[r];
    run.run = r;
    run.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    std::mt19937_64 rng(run.seed);
    std::uniform_real_distribution<double> dist(cfg.sample_low * out.T_ref, cfg.sample_high * out.T_ref);
    const double sampled = dist(rng);
    run.T_start = std::max(base.granularity, std::round(sampled / base.granularity) * base.granularity);
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < cfg.n_runs; r = next++) {
      RunOutcome& run = out.runs[r];
      IPRConfig run_cfg = base;
      run_cfg.T_start = run.T_start;
      run_cfg.step = base.step > 0 ? base.step : 0.0;
      run_cfg.seed = run.seed;
      try {
        auto optimizer = factory();
        run.result = ipr_run(sys, run_cfg, *optimizer);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };
  const int threads = std::clamp(cfg.threads, 1, cfg.n_runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(out.runs.begin(), out.runs.end(), [](const RunOutcome& a, const RunOutcome& b) {
    const bool a_ok = a.error.empty() && a.result.found;
    const bool b_ok = b.error.empty() && b.result.found;
    if (a_ok != b_ok) return a_ok;
    if (a.result.T_best != b.result.T_best) return a.result.T_best < b.result.T_best;
    return a.seed < b.seed;
  });
  out.summary = summarize(out.runs);
  return out;
}

}  // namespace qudit
