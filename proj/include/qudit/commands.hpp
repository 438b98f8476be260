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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qudit::cli {

enum ExitCode : int { kSuccess = 0, kInvalid = 1, kSearchFailed = 2, kNumericAbort = 3 };

struct OptimizeArgs {
  std::filesystem::path config;
  std::string gate;
  int d = 2;
  double T = 0.0;
  std::filesystem::path out;
  std::optional<std::filesystem::path> log;  // default: <out>.iterations.csv
};

struct IprArgs {
  std::filesystem::path config;
  std::string gate;
  int d = 2;
  double t_start = 0.0;
  std::filesystem::path out;
  std::optional<double> mock_threshold;
};

struct SweepArgs {
  std::filesystem::path config;
  std::string gate;
  int d_low = 2;
  int d_high = 2;
  int runs = 10;
  std::filesystem::path out;
  std::optional<double> mock_threshold;  // threshold per unit d
};

struct FitArgs {
  std::filesystem::path in;
  std::string model = "quadratic";
  std::filesystem::path out;
};

struct SimulateArgs {
  std::filesystem::path pulse;
  std::filesystem::path out;
  std::optional<int> steps_per_ns;
};

struct ExportLabArgs {
  std::filesystem::path pulse;
  double sample_rate = 20.0;  // samples per ns
  std::filesystem::path out;
};

// Each command reports errors on `err` and returns an ExitCode value.
int cmd_optimize(const OptimizeArgs& args, std::ostream& err);
int cmd_ipr(const IprArgs& args, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& err);
int cmd_fit(const FitArgs& args, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& err);
int cmd_export_lab(const ExportLabArgs& args, std::ostream& err);

/// Worker threads: QUDIT_THREADS if set, else hardware concurrency.
int thread_count();

}  // namespace qudit::cli
