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

// quditctl: pulse optimization, duration search and export.

#include <iostream>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "qudit/commands.hpp"

namespace {

// Parses "2..5" or a single integer.
bool parse_range(const std::string& s, int& lo, int& hi) {
  static const std::regex re(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return false;
  lo = std::stoi(m[1].str());
  hi = m[2].matched ? std::stoi(m[2].str()) : lo;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qudit::cli;
  CLI::App app{"Qudit gate pulse optimization"};
  app.require_subcommand(1);
  int code = kSuccess;

  OptimizeArgs opt;
  std::string opt_log;
  auto* optimize = app.add_subcommand("optimize", "Optimize a pulse at fixed duration");
  optimize->add_option("--config", opt.config, "Config JSON");
  optimize->add_option("--gate", opt.gate, "Gate name")->required();
  optimize->add_option("--d", opt.d, "Levels per qudit")->required();
  optimize->add_option("--T", opt.T, "Duration in ns")->required();
  optimize->add_option("--out", opt.out, "Pulse JSON")->required();
  optimize->add_option("--log", opt_log, "Iteration CSV (default <out>.iterations.csv)");
  optimize->callback([&] {
    if (!opt_log.empty()) opt.log = opt_log;
    code = cmd_optimize(opt, std::cerr);
  });

  IprArgs ipr;
  double ipr_mock = 0.0;
  auto* ipr_cmd = app.add_subcommand("ipr", "Search the shortest duration by incremental re-seeding");
  ipr_cmd->add_option("--config", ipr.config, "Config JSON");
  ipr_cmd->add_option("--gate", ipr.gate, "Gate name")->required();
  ipr_cmd->add_option("--d", ipr.d, "Levels per qudit")->required();
  ipr_cmd->add_option("--t-start", ipr.t_start, "Starting duration in ns")->required();
  ipr_cmd->add_option("--out", ipr.out, "Result JSON")->required();
  auto* ipr_mock_opt = ipr_cmd->add_option("--mock-threshold", ipr_mock, "Use a mock optimizer succeeding iff T >= value");
  ipr_cmd->callback([&] {
    if (ipr_mock_opt->count()) ipr.mock_threshold = ipr_mock;
    code = cmd_ipr(ipr, std::cerr);
  });

  SweepArgs sweep;
  std::string d_range = "2..2";
  double sweep_mock = 0.0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Multi-start duration search over a range of d");
  sweep_cmd->add_option("--config", sweep.config, "Config JSON");
  sweep_cmd->add_option("--gate", sweep.gate, "Gate name")->required();
  sweep_cmd->add_option("--d-range", d_range, "Range lo..hi")->required();
  sweep_cmd->add_option("--runs", sweep.runs, "Starts per d");
  sweep_cmd->add_option("--out", sweep.out, "Result CSV")->required();
  auto* sweep_mock_opt =
      sweep_cmd->add_option("--mock-threshold", sweep_mock, "Mock optimizer succeeding iff T >= value * d");
  sweep_cmd->callback([&] {
    if (!parse_range(d_range, sweep.d_low, sweep.d_high)) {
      std::cerr << "error: --d-range must look like 2..5\n";
      code = kInvalid;
      return;
    }
    if (sweep_mock_opt->count()) sweep.mock_threshold = sweep_mock;
    code = cmd_sweep(sweep, std::cerr);
  });

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit duration against d");
  fit_cmd->add_option("--in", fit.in, "Durations CSV")->required();
  fit_cmd->add_option("--model", fit.model, "linear or quadratic");
  fit_cmd->add_option("--out", fit.out, "Fit JSON")->required();
  fit_cmd->callback([&] { code = cmd_fit(fit, std::cerr); });

  SimulateArgs sim;
  int sim_steps = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Propagate a stored pulse and export populations");
  sim_cmd->add_option("--pulse", sim.pulse, "Pulse JSON")->required();
  sim_cmd->add_option("--out", sim.out, "Trajectory CSV")->required();
  auto* sim_steps_opt = sim_cmd->add_option("--steps-per-ns", sim_steps, "Integrator resolution")->check(CLI::PositiveNumber);
  sim_cmd->callback([&] {
    if (sim_steps_opt->count()) sim.steps_per_ns = sim_steps;
    code = cmd_simulate(sim, std::cerr);
  });

  ExportLabArgs lab;
  auto* lab_cmd = app.add_subcommand("export-lab", "Sample lab-frame control waveforms");
  lab_cmd->add_option("--pulse", lab.pulse, "Pulse JSON")->required();
  lab_cmd->add_option("--sample-rate", lab.sample_rate, "Samples per ns")->check(CLI::PositiveNumber);
  lab_cmd->add_option("--out", lab.out, "Waveform CSV")->required();
  lab_cmd->callback([&] { code = cmd_export_lab(lab, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  return code;
}
