// Copyright 2026 The driftskip Authors
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

#include "driftskip/commands.hpp"

#include <fmt/format.h>

#include <future>
#include <iostream>
#include <set>

#include "driftskip/experiment.hpp"

namespace driftskip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentConfig load_with_overrides(const CliOptions& opts) {
  ExperimentConfig cfg = load_experiment_config(opts.config);
  if (opts.seed) cfg.override_seed(*opts.seed);
  if (opts.out) cfg.output = *opts.out;
  if (opts.shots) {
    if (*opts.shots == 0) throw ConfigError("--shots: must be positive");
    cfg.shots = *opts.shots;
  }
  if (opts.exact) cfg.shots = 0;
  return cfg;
}

struct Outcome {
  std::string label;
  std::optional<RunRecord> record;
  std::string error;
};

/// Runs independent setups concurrently; results come back in input order.
std::vector<Outcome> run_all(const std::vector<std::pair<std::string, ExperimentSetup>>& jobs) {
  std::vector<std::future<RunRecord>> futures;
  futures.reserve(jobs.size());
  for (const auto& job : jobs) {
    futures.push_back(std::async(std::launch::async, [&job] { return run_experiment(job.second); }));
  }
  std::vector<Outcome> out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Outcome o{jobs[i].first, std::nullopt, {}};
    try {
      o.record = futures[i].get();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::string unique_label(const std::string& label, std::set<std::string>& seen) {
  std::string candidate = label;
  for (int n = 2; seen.count(candidate); ++n) candidate = fmt::format("{}_{}", label, n);
  seen.insert(candidate);
  return candidate;
}

void write_record(const fs::path& dir, const std::string& stem, const RunRecord& r) {
  write_text(dir / (stem + ".json"), run_record_to_json(r).dump(1) + "\n");
  write_text(dir / (stem + ".csv"), run_record_csv(r));
}

std::string describe(const RunRecord& r) {
  const auto& s = r.summary;
  return fmt::format("{}: accepted {} / jobs {} / skips {} / circuits {} / final energy {}{}",
                     r.controller.label(), s.accepted_iterations, s.jobs, s.skip_count,
                     s.total_circuits, s.final_energy ? fmt::format("{:.6f}", *s.final_energy) : "n/a",
                     r.ground_energy ? fmt::format(" (ground {:.6f})", *r.ground_energy) : "");
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cmd_run(const CliOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const ExperimentConfig cfg = load_with_overrides(opts);
    const ExperimentSetup setup = make_setup(cfg, cfg.controllers.front(), cfg.hamiltonians.front());
    const RunRecord record = run_experiment(setup);
    write_record(cfg.output, "run", record);
    log << describe(record) << "\n";
    log << "wrote " << (cfg.output / "run.json").string() << " and " << (cfg.output / "run.csv").string()
        << "\n";
    return record.summary.truncated ? 1 : 0;
  });
}

int cmd_compare(const CliOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const ExperimentConfig cfg = load_with_overrides(opts);
    if (cfg.controllers.size() < 2) throw ConfigError("$.controllers: compare needs at least two controllers");
    std::vector<std::pair<std::string, ExperimentSetup>> jobs;
    std::set<std::string> seen;
    for (const auto& c : cfg.controllers) {
      jobs.emplace_back(unique_label(c.label(), seen), make_setup(cfg, c, cfg.hamiltonians.front()));
    }
    const auto outcomes = run_all(jobs);
    std::vector<RunRecord> records;
    int status = 0;
    for (const auto& o : outcomes) {
      if (!o.record) {
        log << "run '" << o.label << "' failed: " << o.error << "\n";
        status = 1;
        continue;
      }
      write_record(cfg.output, o.label, *o.record);
      log << describe(*o.record) << "\n";
      if (o.record->summary.truncated) {
        log << "run '" << o.label << "' stopped before its iteration budget\n";
        status = 1;
      }
      records.push_back(*o.record);
    }
    if (records.size() >= 2) {
      write_text(cfg.output / "compare.json", compare_records(records).dump(1) + "\n");
      log << "wrote " << (cfg.output / "compare.json").string() << "\n";
    }
    return status;
  });
}

int cmd_sweep(const CliOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const ExperimentConfig cfg = load_with_overrides(opts);
    if (!cfg.sweep) throw ConfigError("$.sweep: sweep section is required");
    const auto& sw = *cfg.sweep;
    const ControllerConfig base = cfg.controllers.front();
    std::vector<std::pair<std::string, ExperimentSetup>> jobs;
    if (sw.axis == SweepAxis::HAMILTONIAN) {
      for (const auto& h : sw.hamiltonians) jobs.emplace_back(h.filename().string(), make_setup(cfg, base, h));
    } else {
      if (base.kind != ControllerKind::DISQ) {
        throw ConfigError("$.controller.kind: th_p and K sweeps need a DISQ controller");
      }
      for (double v : sw.values) {
        ControllerConfig c = base;
        c.weights.clear();
        if (sw.axis == SweepAxis::TH_P) {
          c.th_p = v;
        } else {
          c.K = static_cast<std::size_t>(v);
        }
        c.name = fmt::format("{}[{}={}]", base.label(), sweep_axis_name(sw.axis), v);
        jobs.emplace_back(fmt::format("{}", v), make_setup(cfg, c, cfg.hamiltonians.front()));
      }
    }
    const auto outcomes = run_all(jobs);
    std::vector<SweepRow> rows;
    int status = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      if (!o.record) {
        log << "run '" << o.label << "' failed: " << o.error << "\n";
        status = 1;
        continue;
      }
      write_record(cfg.output, fmt::format("sweep_{}", i), *o.record);
      log << o.label << " -> " << describe(*o.record) << "\n";
      rows.push_back({o.label, *o.record});
    }
    write_text(cfg.output / "sweep.json", sweep_report(sw.axis, rows).dump(1) + "\n");
    write_text(cfg.output / "sweep.csv", sweep_csv(sw.axis, rows));
    log << "wrote " << (cfg.output / "sweep.json").string() << "\n";
    return status;
  });
}

int cmd_gen_noise(const CliOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    const json j = read_json(opts.config);
    DriftTrace trace;
    if (j.contains("noise") || j.contains("hamiltonian")) {
      ExperimentConfig cfg = parse_experiment_config(j, opts.config.parent_path());
      if (opts.seed) cfg.override_seed(*opts.seed);
      if (!cfg.noise) throw ConfigError("$.noise: config has no noise section");
      trace = make_setup(cfg, cfg.controllers.front(), cfg.hamiltonians.front()).trace;
    } else {
      NoiseConfig nc = noise_config_from_json(j);
      if (opts.seed) nc.seed = *opts.seed;
      trace = generate_trace(nc);
    }
    const fs::path out = opts.out.value_or("trace.json");
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_trace(trace, out.string());
    log << "wrote " << trace.offsets.size() << " offsets (" << trace.episodes.size() << " episodes) to "
        << out.string() << "\n";
    return 0;
  });
}

int cmd_report(const CliOptions& opts, std::ostream& log) {
  return guarded(log, [&] {
    if (opts.records.empty()) throw ConfigError("report: give one or more RunRecord files");
    std::vector<RunRecord> records;
    for (const auto& p : opts.records) records.push_back(run_record_from_json(read_json(p)));
    json report;
    if (records.size() == 1) {
      const auto& r = records.front();
      report = {{"label", r.controller.label()},
                {"Q", progress_quality(r) ? json(*progress_quality(r)) : json(nullptr)},
                {"summary", run_record_to_json(r).at("summary")}};
    } else {
      report = compare_records(records);
    }
    if (opts.out) {
      write_text(*opts.out, report.dump(1) + "\n");
      log << "wrote " << opts.out->string() << "\n";
    } else {
      std::cout << report.dump(1) << "\n";
    }
    return 0;
  });
}

}  // namespace driftskip
