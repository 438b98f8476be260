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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qudit/analysis.hpp"
#include "qudit/dynamics.hpp"
#include "qudit/ipr.hpp"
#include "qudit/objective.hpp"

namespace qudit {

inline constexpr const char* kToolVersion = "0.1.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration. Physical parameters are given in GHz / MHz in the
/// file and converted to rad/ns when a system is built.
struct RunConfig {
  std::vector<double> omega_ghz{4.914, 5.114};
  std::vector<double> xi_ghz{-0.330, -0.330};
  double coupling_mhz = 3.8;
  int guard = 2;
  std::optional<double> omega_rot_ghz;

  ObjectiveConfig objective;

  std::optional<int> max_iter;
  double guess_scale = 0.1;

  std::optional<int> steps_per_ns;

  double ipr_T_start = 50.0;
  double ipr_step = 0.0;
  double ipr_granularity = 1.0;
  int ipr_max_restarts = 5;
  int ipr_max_attempts = 200;
  double sample_low = 0.8;
  double sample_high = 1.2;

  std::uint64_t seed = 1;

  QuditSystem build_system(int num_qudits, int d) const;
  int steps_for(const QuditSystem& sys) const;
  int max_iter_for(const QuditSystem& sys) const;
  IPRConfig ipr_config(double T_start) const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Contents of a pulse file. Frequencies and coefficients in rad/ns.
struct PulseFile {
  QuditSystem system;
  PulseParams pulse;
  double fidelity = 0.0;
  std::string gate;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  int steps_per_ns = 0;  // integrator used to score `fidelity`
};

nlohmann::json to_json(const QuditSystem& sys);
QuditSystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PulseFile& pf);
PulseFile pulse_from_json(const nlohmann::json& j);

void save_pulse(const std::filesystem::path& path, const PulseFile& pf);
PulseFile load_pulse(const std::filesystem::path& path);

nlohmann::json to_json(const IPRRecord& r);
nlohmann::json to_json(const FitResult& f);

/// time_ns, |amplitude|^2 per (column, basis state), guard population per
/// column and column-averaged.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// time_ns, f_1[, f_2] sampled at `sample_rate` samples per ns.
void write_lab_csv(std::ostream& os, const PulseParams& params, double omega_rot, double sample_rate);

/// Reads (d, T) points. Accepts a sweep CSV (summary rows' T_min, or the
/// per-d minimum of T_best) or a plain CSV with columns d and T_ns.
std::vector<DurationPoint> read_durations_csv(const std::filesystem::path& path);

/// Writes `content` to `path`, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

}  // namespace qudit
