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

#include "qudit/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "qudit/io.hpp"

namespace qudit::cli {

using nlohmann::json;

int thread_count() {
  if (const char* env = std::getenv("QUDIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

RunConfig config_or_default(const std::filesystem::path& path) {
  return path.empty() ? parse_config(json::object()) : load_config(path);
}

QuditSystem system_for_gate(const RunConfig& cfg, const std::string& gate_name, int d) {
  return cfg.build_system(gate_qudits(gate_name), d);
}

json record_list(const IPRResult& r) {
  json records = json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return records;
}

}  // namespace

int cmd_optimize(const OptimizeArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = config_or_default(args.config);
    if (!(args.T > 0)) throw InvalidArgument("optimize: T must be positive");
    const QuditSystem sys = system_for_gate(cfg, args.gate, args.d);
    const GateSpec target = gate(args.gate, args.d);
    const int steps = cfg.steps_for(sys);

    PulseParams pulse = make_pulse(sys, args.T);
    pulse.alpha = random_guess(pulse, cfg.guess_scale, cfg.seed);

    std::ostringstream log;
    log << "iteration,objective,infidelity,guard,step\n";
    OptimizerConfig opt;
    opt.max_iter = cfg.max_iter_for(sys);
    opt.on_iteration = [&](const IterationLog& it) {
      log << it.iteration << ',' << format_double(it.objective) << ',' << format_double(it.infidelity) << ','
          << format_double(it.guard) << ',' << format_double(it.step) << '\n';
    };
    const OptResult result = minimize(sys, pulse, target, cfg.objective, opt, steps);

    PulseFile pf;
    pf.system = sys;
    pf.pulse = pulse;
    pf.pulse.alpha = result.alpha_final;
    pf.fidelity = result.fidelity;
    pf.gate = args.gate;
    pf.seed = cfg.seed;
    pf.steps_per_ns = steps;
    save_pulse(args.out, pf);
    write_text(args.log ? *args.log : std::filesystem::path(args.out.string() + ".iterations.csv"), log.str());
    if (!result.converged)
      err << "optimize: not converged after " << result.iterations << " iterations (fidelity "
          << format_double(result.fidelity) << ")\n";
    return result.converged ? kSuccess : kSearchFailed;
  });
}

int cmd_ipr(const IprArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = config_or_default(args.config);
    if (!(args.t_start > 0)) throw InvalidArgument("ipr: t-start must be positive");
    const QuditSystem sys = system_for_gate(cfg, args.gate, args.d);
    const GateSpec target = gate(args.gate, args.d);
    const int steps = cfg.steps_for(sys);
    const IPRConfig ipr_cfg = cfg.ipr_config(args.t_start);

    std::unique_ptr<DurationOptimizer> optimizer;
    if (args.mock_threshold) {
      optimizer = std::make_unique<ThresholdMockOptimizer>(*args.mock_threshold, cfg.objective.error_threshold);
    } else {
      OptimizerConfig opt;
      opt.max_iter = cfg.max_iter_for(sys);
      optimizer = std::make_unique<GradientDurationOptimizer>(sys, target, cfg.objective, opt, steps);
    }
    const IPRResult result = ipr_run(sys, ipr_cfg, *optimizer);

    json out;
    out["config"] = to_json(cfg);
    out["gate"] = args.gate;
    out["d"] = args.d;
    out["T_start"] = args.t_start;
    out["mock_threshold"] = args.mock_threshold ? json(*args.mock_threshold) : json(nullptr);
    out["found"] = result.found;
    out["T_best"] = result.T_best;
    out["fidelity_best"] = result.fidelity_best;
    out["restarts_used"] = result.restarts_used;
    out["records"] = record_list(result);
    if (result.pulse_best.alpha.size() > 0) {
      PulseFile pf;
      pf.system = sys;
      pf.pulse = result.pulse_best;
      pf.fidelity = result.fidelity_best;
      pf.gate = args.gate;
      pf.seed = cfg.seed;
      pf.steps_per_ns = steps;
      out["best_pulse"] = to_json(pf);
    } else {
      out["best_pulse"] = nullptr;
    }
    const auto successes = std::count_if(result.records.begin(), result.records.end(),
                                         [](const IPRRecord& r) { return r.success; });
    out["summary"] = {{"attempts", result.records.size()},
                      {"successful_attempts", successes},
                      {"T_best", result.T_best},
                      {"fidelity_best", result.fidelity_best}};
    write_text(args.out, out.dump(2) + "\n");
    if (!result.found) err << "ipr: no duration reached the target fidelity\n";
    return result.found ? kSuccess : kSearchFailed;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = config_or_default(args.config);
    if (args.d_low < 2 || args.d_high < args.d_low) throw InvalidArgument("sweep: invalid d range");
    if (args.runs < 1) throw InvalidArgument("sweep: runs must be at least 1");
    const int nq = gate_qudits(args.gate);

    auto factory_for = [&](const QuditSystem& sys, int d) -> OptimizerFactory {
      if (args.mock_threshold) {
        const double threshold = *args.mock_threshold * d;
        const double eps = cfg.objective.error_threshold;
        return [threshold, eps] { return std::make_unique<ThresholdMockOptimizer>(threshold, eps); };
      }
      OptimizerConfig opt;
      opt.max_iter = cfg.max_iter_for(sys);
      const GateSpec target = gate(args.gate, d);
      const int steps = cfg.steps_for(sys);
      const ObjectiveConfig ocfg = cfg.objective;
      return [sys, target, ocfg, opt, steps] {
        return std::make_unique<GradientDurationOptimizer>(sys, target, ocfg, opt, steps);
      };
    };

    // Pilot searches run in order: starts above d = 3 extrapolate linearly
    // from the two previous pilot durations.
    struct Entry {
      int d;
      QuditSystem sys;
      double T_ref;
    };
    std::vector<Entry> entries;
    for (int d = args.d_low; d <= args.d_high; ++d) {
      const QuditSystem sys = cfg.build_system(nq, d);
      double T_start = cfg.ipr_T_start;
      if (d > 3 && entries.size() >= 2) {
        const double slope = entries.back().T_ref - entries[entries.size() - 2].T_ref;
        T_start = std::max(cfg.ipr_granularity, entries.back().T_ref + slope);
      }
      T_start = std::max(cfg.ipr_granularity, std::round(T_start / cfg.ipr_granularity) * cfg.ipr_granularity);
      auto pilot_optimizer = factory_for(sys, d)();
      const IPRResult pilot = ipr_run(sys, cfg.ipr_config(T_start), *pilot_optimizer);
      entries.push_back({d, sys, pilot.T_best});
    }

    const int threads = thread_count();
    const int per_d = std::max(1, threads / static_cast<int>(entries.size()));
    std::vector<std::future<MultiRunResult>> futures;
    for (const auto& e : entries) {
      futures.push_back(std::async(std::launch::async, [&, e] {
        MultiRunConfig mr;
        mr.n_runs = args.runs;
        mr.sample_low = cfg.sample_low;
        mr.sample_high = cfg.sample_high;
        mr.T_ref = e.T_ref;
        mr.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(e.d));
        mr.threads = per_d;
        return multi_run(e.sys, cfg.ipr_config(e.T_ref), factory_for(e.sys, e.d), mr);
      }));
    }

    std::ostringstream csv;
    csv << "gate,d,run,seed,T_start,T_best,fidelity,T_min,T_mean,T_std\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      MultiRunResult res = futures[i].get();
      std::sort(res.runs.begin(), res.runs.end(), [](const RunOutcome& a, const RunOutcome& b) { return a.run < b.run; });
      const int d = entries[i].d;
      for (const auto& r : res.runs) {
        const bool ok = r.error.empty() && r.result.found;
        csv << args.gate << ',' << d << ',' << r.run << ',' << r.seed << ',' << format_double(r.T_start) << ','
            << (ok ? format_double(r.result.T_best) : "") << ',' << format_double(r.result.fidelity_best) << ",,,\n";
        if (!r.error.empty()) err << "sweep: d=" << d << " run " << r.run << " failed: " << r.error << '\n';
      }
      const auto& s = res.summary;
      csv << args.gate << ',' << d << ",summary,,," << (s.successes ? format_double(s.min) : "") << ','
          << format_double(s.best_fidelity) << ',' << (s.successes ? format_double(s.min) : "") << ','
          << (s.successes ? format_double(s.mean) : "") << ',' << (s.successes ? format_double(s.stddev) : "")
          << '\n';
    }
    write_text(args.out, csv.str());
    return kSuccess;
  });
}

int cmd_fit(const FitArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const FitModel model = parse_fit_model(args.model);
    const auto points = read_durations_csv(args.in);
    const FitResult f = fit(points, model);
    json out = to_json(f);
    json pts = json::array();
    for (const auto& p : points) pts.push_back({{"d", p.d}, {"T_ns", p.T}});
    out["points"] = pts;
    json table = json::array();
    for (int d = 2; d <= 8; ++d) table.push_back({{"d", d}, {"T_ns", evaluate_fit(f, d)}});
    out["evaluation"] = table;
    write_text(args.out, out.dump(2) + "\n");
    return kSuccess;
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const PulseFile pf = load_pulse(args.pulse);
    PropagationOptions opts;
    opts.steps_per_ns = args.steps_per_ns ? *args.steps_per_ns
                        : pf.steps_per_ns > 0 ? pf.steps_per_ns
                                              : default_steps_per_ns(pf.system);
    opts.store_trajectory = true;
    opts.workers = std::min(thread_count(), pf.system.essential_dim());
    const Trajectory traj = propagate(pf.system, pf.pulse, opts);
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_text(args.out, csv.str());
    return kSuccess;
  });
}

int cmd_export_lab(const ExportLabArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const PulseFile pf = load_pulse(args.pulse);
    std::ostringstream csv;
    write_lab_csv(csv, pf.pulse, pf.system.omega_rot, args.sample_rate);
    write_text(args.out, csv.str());
    return kSuccess;
  });
}

}  // namespace qudit::cli
