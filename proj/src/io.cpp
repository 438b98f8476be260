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

#include "qudit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qudit {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw InvalidArgument(std::string("config: '") + what + "' must be an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw InvalidArgument(std::string("config: unknown key '") + key + "' in " + what);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v);
  out = v;
}

}  // namespace

RunConfig parse_config(const json& j) {
  require_object(j, "root");
  check_keys(j, {"system", "objective", "optimizer", "integrator", "ipr", "seed"}, "root");
  RunConfig cfg;
  if (j.contains("system")) {
    const auto& s = j.at("system");
    require_object(s, "system");
    check_keys(s, {"omega_ghz", "xi_ghz", "coupling_mhz", "guard", "omega_rot_ghz"}, "system");
    read(s, "omega_ghz", cfg.omega_ghz);
    read(s, "xi_ghz", cfg.xi_ghz);
    read(s, "coupling_mhz", cfg.coupling_mhz);
    read(s, "guard", cfg.guard);
    read(s, "omega_rot_ghz", cfg.omega_rot_ghz);
  }
  if (j.contains("objective")) {
    const auto& o = j.at("objective");
    require_object(o, "objective");
    check_keys(o, {"w_guard", "w_l2", "error_threshold"}, "objective");
    read(o, "w_guard", cfg.objective.w_guard);
    read(o, "w_l2", cfg.objective.w_l2);
    read(o, "error_threshold", cfg.objective.error_threshold);
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    require_object(o, "optimizer");
    check_keys(o, {"max_iter", "guess_scale"}, "optimizer");
    read(o, "max_iter", cfg.max_iter);
    read(o, "guess_scale", cfg.guess_scale);
  }
  if (j.contains("integrator")) {
    const auto& o = j.at("integrator");
    require_object(o, "integrator");
    check_keys(o, {"steps_per_ns"}, "integrator");
    read(o, "steps_per_ns", cfg.steps_per_ns);
  }
  if (j.contains("ipr")) {
    const auto& o = j.at("ipr");
    require_object(o, "ipr");
    check_keys(o, {"T_start", "step", "granularity", "max_restarts", "max_attempts", "sample_low", "sample_high"}, "ipr");
    read(o, "T_start", cfg.ipr_T_start);
    read(o, "step", cfg.ipr_step);
    read(o, "granularity", cfg.ipr_granularity);
    read(o, "max_restarts", cfg.ipr_max_restarts);
    read(o, "max_attempts", cfg.ipr_max_attempts);
    read(o, "sample_low", cfg.sample_low);
    read(o, "sample_high", cfg.sample_high);
  }
  read(j, "seed", cfg.seed);

  cfg.objective.validate();
  if (cfg.guard < 0) throw InvalidArgument("config: guard must be non-negative");
  if (cfg.max_iter && *cfg.max_iter < 1) throw InvalidArgument("config: max_iter must be at least 1");
  if (cfg.steps_per_ns && *cfg.steps_per_ns < 1) throw InvalidArgument("config: steps_per_ns must be at least 1");
  if (cfg.guess_scale < 0) throw InvalidArgument("config: guess_scale must be non-negative");
  if (cfg.omega_ghz.empty() || cfg.xi_ghz.empty()) throw InvalidArgument("config: omega_ghz and xi_ghz are required");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config: malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["system"] = {{"omega_ghz", cfg.omega_ghz},
                 {"xi_ghz", cfg.xi_ghz},
                 {"coupling_mhz", cfg.coupling_mhz},
                 {"guard", cfg.guard},
                 {"omega_rot_ghz", cfg.omega_rot_ghz ? json(*cfg.omega_rot_ghz) : json(nullptr)}};
  j["objective"] = {{"w_guard", cfg.objective.w_guard},
                    {"w_l2", cfg.objective.w_l2},
                    {"error_threshold", cfg.objective.error_threshold}};
  j["optimizer"] = {{"max_iter", cfg.max_iter ? json(*cfg.max_iter) : json(nullptr)},
                    {"guess_scale", cfg.guess_scale}};
  j["integrator"] = {{"steps_per_ns", cfg.steps_per_ns ? json(*cfg.steps_per_ns) : json(nullptr)}};
  j["ipr"] = {{"T_start", cfg.ipr_T_start},           {"step", cfg.ipr_step},
              {"granularity", cfg.ipr_granularity},   {"max_restarts", cfg.ipr_max_restarts},
              {"max_attempts", cfg.ipr_max_attempts}, {"sample_low", cfg.sample_low},
              {"sample_high", cfg.sample_high}};
  j["seed"] = cfg.seed;
  return j;
}

QuditSystem RunConfig::build_system(int num_qudits, int d) const {
  if (static_cast<int>(omega_ghz.size()) < num_qudits || static_cast<int>(xi_ghz.size()) < num_qudits)
    throw InvalidArgument("config: not enough per-qudit parameters");
  QuditSystem sys;
  sys.num_qudits = num_qudits;
  sys.d = d;
  sys.guard = guard;
  for (int k = 0; k < num_qudits; ++k) {
    sys.omega.push_back(from_ghz(omega_ghz[k]));
    sys.xi.push_back(from_ghz(xi_ghz[k]));
  }
  sys.coupling_J = num_qudits == 2 ? from_mhz(coupling_mhz) : 0.0;
  sys.validate();
  sys.omega_rot = omega_rot_ghz ? from_ghz(*omega_rot_ghz) : rotating_frame_frequency(sys);
  return sys;
}

int RunConfig::steps_for(const QuditSystem& sys) const {
  return steps_per_ns ? *steps_per_ns : default_steps_per_ns(sys);
}

int RunConfig::max_iter_for(const QuditSystem& sys) const { return max_iter ? *max_iter : default_max_iter(sys); }

IPRConfig RunConfig::ipr_config(double T_start) const {
  IPRConfig c;
  c.T_start = T_start;
  c.step = ipr_step;
  c.granularity = ipr_granularity;
  c.guess_scale = guess_scale;
  c.max_restarts = ipr_max_restarts;
  c.max_attempts = ipr_max_attempts;
  c.error_threshold = objective.error_threshold;
  c.seed = seed;
  return c;
}

json to_json(const QuditSystem& sys) {
  return {{"num_qudits", sys.num_qudits}, {"d", sys.d},
          {"guard", sys.guard},           {"omega", sys.omega},
          {"xi", sys.xi},                 {"coupling_J", sys.coupling_J},
          {"omega_rot", sys.omega_rot}};
}

QuditSystem system_from_json(const json& j) {
  try {
    QuditSystem sys;
    sys.num_qudits = j.at("num_qudits").get<int>();
    sys.d = j.at("d").get<int>();
    sys.guard = j.at("guard").get<int>();
    sys.omega = j.at("omega").get<std::vector<double>>();
    sys.xi = j.at("xi").get<std::vector<double>>();
    sys.coupling_J = j.at("coupling_J").get<double>();
    sys.omega_rot = j.at("omega_rot").get<double>();
    sys.validate();
    return sys;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("pulse file: bad system block: ") + e.what());
  }
}

json to_json(const PulseFile& pf) {
  json j;
  j["system"] = to_json(pf.system);
  j["T_ns"] = pf.pulse.T;
  j["carriers_rot"] = pf.pulse.carriers;
  j["N_b"] = pf.pulse.num_splines;
  j["alpha"] = std::vector<double>(pf.pulse.alpha.data(), pf.pulse.alpha.data() + pf.pulse.alpha.size());
  j["alpha_max"] = pf.pulse.alpha_max;
  j["fidelity"] = pf.fidelity;
  j["metadata"] = {{"gate", pf.gate}, {"seed", pf.seed}, {"tool-version", pf.tool_version}};
  if (pf.steps_per_ns > 0) j["metadata"]["steps_per_ns"] = pf.steps_per_ns;
  return j;
}

PulseFile pulse_from_json(const json& j) {
  PulseFile pf;
  try {
    pf.system = system_from_json(j.at("system"));
    pf.pulse.T = j.at("T_ns").get<double>();
    pf.pulse.carriers = j.at("carriers_rot").get<std::vector<std::vector<double>>>();
    pf.pulse.num_splines = j.at("N_b").get<int>();
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    pf.pulse.alpha = Eigen::Map<const RVector>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    pf.pulse.alpha_max = j.at("alpha_max").get<double>();
    pf.fidelity = j.at("fidelity").get<double>();
    const auto& meta = j.at("metadata");
    pf.gate = meta.at("gate").get<std::string>();
    pf.seed = meta.at("seed").get<std::uint64_t>();
    pf.tool_version = meta.at("tool-version").get<std::string>();
    pf.steps_per_ns = meta.value("steps_per_ns", 0);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("pulse file: ") + e.what());
  }
  pf.pulse.validate();
  if (pf.pulse.num_controls() != pf.system.num_qudits)
    throw InvalidArgument("pulse file: control count does not match the system");
  return pf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_pulse(const std::filesystem::path& path, const PulseFile& pf) { write_text(path, to_json(pf).dump(2) + "\n"); }

PulseFile load_pulse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pulse file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("pulse file: malformed JSON: " + std::string(e.what()));
  }
  return pulse_from_json(j);
}

json to_json(const IPRRecord& r) {
  return {{"attempt", r.attempt},
          {"T_ns", r.T},
          {"fidelity", r.fidelity},
          {"success", r.success},
          {"seed_kind", std::string(to_string(r.seed_kind))},
          {"step_ns", r.step_at_attempt}};
}

json to_json(const FitResult& f) {
  json coeffs = {{"b", f.b}, {"c", f.c}};
  json errors = {{"b", f.se_b}, {"c", f.se_c}};
  if (f.model == FitModel::quadratic) {
    coeffs["a"] = f.a;
    errors["a"] = f.se_a;
  }
  return {{"model", std::string(to_string(f.model))},
          {"coefficients_ns", coeffs},
          {"std_errors_ns", errors},
          {"r_squared", f.r_squared},
          {"degenerate", f.degenerate},
          {"num_points", f.num_points}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) throw InvalidArgument("trajectory: nothing stored");
  const Eigen::Index rows = traj.states.front().rows();
  const Eigen::Index cols = traj.states.front().cols();
  os << "time_ns";
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index s = 0; s < rows; ++s) os << ",pop_c" << c << "_s" << s;
  for (Eigen::Index c = 0; c < cols; ++c) os << ",guard_c" << c;
  os << ",guard_avg\n";
  const auto avg = guard_populations(traj);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]);
    const auto& st = traj.states[i];
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index s = 0; s < rows; ++s) os << ',' << format_double(std::norm(st(s, c)));
    for (Eigen::Index c = 0; c < cols; ++c) os << ',' << format_double(traj.guard_pop[i][c]);
    os << ',' << format_double(avg[i]) << '\n';
  }
}

void write_lab_csv(std::ostream& os, const PulseParams& params, double omega_rot, double sample_rate) {
  if (!(sample_rate > 0)) throw InvalidArgument("export-lab: sample rate must be positive");
  params.validate();
  os << "time_ns";
  for (int k = 0; k < params.num_controls(); ++k) os << ",f_" << (k + 1);
  os << '\n';
  const auto samples = static_cast<long>(std::floor(params.T * sample_rate + 1e-9));
  for (long i = 0; i <= samples; ++i) {
    const double t = std::min(static_cast<double>(i) / sample_rate, params.T);
    const RVector f = lab_frame_control(params, omega_rot, t);
    os << format_double(t);
    for (Eigen::Index k = 0; k < f.size(); ++k) os << ',' << format_double(f[k]);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<DurationPoint> read_durations_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open durations file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("durations: empty file");
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int col_d = column("d");
  const int col_run = column("run");
  const int col_min = column("T_min");
  const int col_best = column("T_best");
  const int col_T = column("T_ns");
  if (col_d < 0 || (col_min < 0 && col_best < 0 && col_T < 0))
    throw InvalidArgument("durations: need a 'd' column and one of T_min, T_best, T_ns");

  auto number = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  };

  std::map<double, double> summary_min;
  std::map<double, double> data_min;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (static_cast<int>(cells.size()) != static_cast<int>(header.size()))
        throw InvalidArgument("durations: ragged row");
      const double d = number(cells[col_d]);
      const bool is_summary = col_run >= 0 && cells[col_run] == "summary";
      if (is_summary) {
        if (col_min >= 0 && !cells[col_min].empty()) summary_min[d] = number(cells[col_min]);
        continue;
      }
      const int col = col_T >= 0 ? col_T : col_best;
      if (col < 0 || cells[col].empty()) continue;
      const double T = number(cells[col]);
      auto [it, inserted] = data_min.emplace(d, T);
      if (!inserted) it->second = std::min(it->second, T);
    }
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const InvalidArgument*>(&e)) throw;
    throw InvalidArgument("durations: non-numeric cell '" + std::string(e.what()) + "'");
  }

  const auto& chosen = summary_min.empty() ? data_min : summary_min;
  std::vector<DurationPoint> points;
  for (const auto& [d, T] : chosen) points.push_back({d, T});
  return points;
}

}  // namespace qudit
