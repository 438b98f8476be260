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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qudit/optimize.hpp"

namespace qudit {

enum class SeedKind { random, truncated, extended };

std::string_view to_string(SeedKind kind);

/// Incremental pulse re-seeding settings. `step <= 0` selects the power
/// of two nearest 0.1 * T_start.
struct IPRConfig {
  double T_start = 50.0;
  double step = 0.0;
  double granularity = 1.0;
  double guess_scale = 0.1;
  int max_restarts = 5;
  int max_attempts = 200;
  double error_threshold = 1e-3;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Power of two nearest to 0.1 * T_start, compared on a log scale.
double default_step(double T_start);

struct IPRRecord {
  int attempt = 0;
  double T = 0.0;
  double fidelity = 0.0;
  bool success = false;
  SeedKind seed_kind = SeedKind::random;
  double step_at_attempt = 0.0;
};

struct IPRResult {
  bool found = false;
  double T_best = 0.0;
  PulseParams pulse_best;  // alpha_best with its shape
  double fidelity_best = 0.0;
  std::vector<IPRRecord> records;
  int restarts_used = 0;
};

/// Fixed-duration optimizer driven by the search. Implementations receive
/// a seed pulse (duration, shape, initial coefficients).
class DurationOptimizer {
 public:
  virtual ~DurationOptimizer() = default;
  virtual OptResult optimize(const PulseParams& seed) = 0;
};

/// The gradient-based optimizer from `minimize`.
class GradientDurationOptimizer : public DurationOptimizer {
 public:
  GradientDurationOptimizer(QuditSystem sys, GateSpec target, ObjectiveConfig objective_cfg,
                            OptimizerConfig optimizer_cfg, int steps_per_ns);

  OptResult optimize(const PulseParams& seed) override;

 private:
  ObjectiveProblem problem_;
  OptimizerConfig cfg_;
};

/// Succeeds iff T >= threshold; failing fidelity rises strictly with T.
class ThresholdMockOptimizer : public DurationOptimizer {
 public:
  explicit ThresholdMockOptimizer(double threshold, double error_threshold = 1e-3)
      : threshold_(threshold), error_threshold_(error_threshold) {}

  OptResult optimize(const PulseParams& seed) override;
  int calls() const { return calls_; }

 private:
  double threshold_;
  double error_threshold_;
  int calls_ = 0;
};

/// Mock driven by an arbitrary fidelity-of-duration function.
class FunctionMockOptimizer : public DurationOptimizer {
 public:
  explicit FunctionMockOptimizer(std::function<double(double)> fidelity) : fidelity_(std::move(fidelity)) {}
  OptResult optimize(const PulseParams& seed) override;

 private:
  std::function<double(double)> fidelity_;
};

/// Runs the duration search. Only random seeds come from `cfg.seed`;
/// every other seed is a refit of an earlier optimized pulse.
IPRResult ipr_run(const QuditSystem& sys, const IPRConfig& cfg, DurationOptimizer& optimizer);

struct MultiRunConfig {
  int n_runs = 10;
  double sample_low = 0.8;
  double sample_high = 1.2;
  double T_ref = 0.0;  // <= 0: pilot run from base T_start
  std::uint64_t seed = 1;
  int threads = 1;
};

struct RunOutcome {
  int run = 0;
  std::uint64_t seed = 0;
  double T_start = 0.0;
  IPRResult result;
  std::string error;  // non-empty if the run threw
};

struct DurationSummary {
  int successes = 0;
  double min = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double best_fidelity = 0.0;
};

struct MultiRunResult {
  double T_ref = 0.0;
  std::vector<RunOutcome> runs;  // sorted by (T_best, seed)
  DurationSummary summary;
};

using OptimizerFactory = std::function<std::unique_ptr<DurationOptimizer>()>;

/// Independent searches from starts drawn in [low, high] * T_ref.
MultiRunResult multi_run(const QuditSystem& sys, const IPRConfig& base, const OptimizerFactory& factory,
                         const MultiRunConfig& cfg);

DurationSummary summarize(const std::vector<RunOutcome>& runs);

/// Deterministic per-run seed derivation.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace qudit
