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

#include "driftskip/experiment.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace driftskip {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

template <typename T>
T field(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_fail(path + "." + key, "has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

void ExperimentConfig::override_seed(std::uint64_t s) {
  seed = s;
  optimizer.seed = s;
  optimizer_seed_set = true;
  if (noise) {
    noise->seed = s;
    noise_seed_set = true;
  }
}

ExperimentConfig parse_experiment_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) config_fail("$", "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.seed = field<std::uint64_t>(j, "seed", "$", 0);

  if (j.contains("hamiltonian")) {
    cfg.hamiltonians.push_back(resolve(base_dir, field<std::string>(j, "hamiltonian", "$", "")));
  }

  if (j.contains("ansatz")) {
    const auto& a = j.at("ansatz");
    try {
      cfg.ansatz_kind = parse_ansatz_kind(field<std::string>(a, "kind", "$.ansatz", "RA"));
    } catch (const std::invalid_argument& e) {
      config_fail("$.ansatz.kind", e.what());
    }
    cfg.ansatz_reps = field<std::size_t>(a, "reps", "$.ansatz", 2);
    if (cfg.ansatz_reps < 1) config_fail("$.ansatz.reps", "must be >= 1");
  }

  auto parse_controller = [](const json& c, const std::string& path) {
    try {
      return controller_config_from_json(c);
    } catch (const std::exception& e) {
      config_fail(path, e.what());
    }
  };
  if (j.contains("controller")) cfg.controllers.push_back(parse_controller(j.at("controller"), "$.controller"));
  if (j.contains("controllers")) {
    const auto& list = j.at("controllers");
    if (!list.is_array()) config_fail("$.controllers", "must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.controllers.push_back(parse_controller(list[i], fmt::format("$.controllers[{}]", i)));
    }
  }
  if (cfg.controllers.empty()) config_fail("$.controller", "at least one controller is required");

  cfg.optimizer.seed = cfg.seed;
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    cfg.optimizer.a0 = field<double>(o, "a0", "$.optimizer", cfg.optimizer.a0);
    cfg.optimizer.alpha = field<double>(o, "alpha", "$.optimizer", cfg.optimizer.alpha);
    cfg.optimizer.c0 = field<double>(o, "c0", "$.optimizer", cfg.optimizer.c0);
    cfg.optimizer.gamma = field<double>(o, "gamma", "$.optimizer", cfg.optimizer.gamma);
    if (o.contains("seed")) {
      cfg.optimizer.seed = field<std::uint64_t>(o, "seed", "$.optimizer", 0);
      cfg.optimizer_seed_set = true;
    }
    cfg.initial_theta = field<std::vector<double>>(o, "initial_theta", "$.optimizer", {});
  }

  cfg.iterations = field<std::int64_t>(j, "iterations", "$", 0);
  if (cfg.iterations < 1) config_fail("$.iterations", "budget must be >= 1");
  cfg.optimizer.max_iterations = cfg.iterations;
  try {
    cfg.optimizer.validate();
  } catch (const std::invalid_argument& e) {
    config_fail("$.optimizer", e.what());
  }
  cfg.max_jobs = field<std::int64_t>(j, "max_jobs", "$", 0);

  if (field<bool>(j, "exact", "$", false)) {
    cfg.shots = 0;
  } else {
    cfg.shots = field<std::uint64_t>(j, "shots", "$", 8192);
    if (cfg.shots == 0) config_fail("$.shots", "must be positive (set \"exact\": true for analytic mode)");
  }

  if (j.contains("noise") && j.contains("trace")) config_fail("$.trace", "give either noise or trace, not both");
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    try {
      NoiseConfig nc = noise_config_from_json(n);
      cfg.noise_seed_set = n.contains("seed");
      cfg.noise_scale_set = n.contains("energy_scale");
      cfg.noise_horizon_set = n.contains("horizon_jobs");
      if (!cfg.noise_seed_set) nc.seed = cfg.seed;
      cfg.noise = nc;
    } catch (const std::exception& e) {
      config_fail("$.noise", e.what());
    }
  }
  if (j.contains("trace")) {
    cfg.trace_path = resolve(base_dir, field<std::string>(j, "trace", "$", ""));
    if (!fs::exists(*cfg.trace_path)) config_fail("$.trace", "file not found: " + cfg.trace_path->string());
  }

  cfg.output = resolve(base_dir, field<std::string>(j, "output", "$", "out"));

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    SweepSpec sw;
    const auto axis = field<std::string>(s, "axis", "$.sweep", "");
    if (axis == "th_p") {
      sw.axis = SweepAxis::TH_P;
    } else if (axis == "K") {
      sw.axis = SweepAxis::K;
    } else if (axis == "hamiltonian") {
      sw.axis = SweepAxis::HAMILTONIAN;
    } else {
      config_fail("$.sweep.axis", "expected th_p, K or hamiltonian");
    }
    if (!s.contains("values") || !s.at("values").is_array() || s.at("values").empty()) {
      config_fail("$.sweep.values", "must be a non-empty array");
    }
    for (std::size_t i = 0; i < s.at("values").size(); ++i) {
      const auto& v = s.at("values")[i];
      const std::string path = fmt::format("$.sweep.values[{}]", i);
      if (sw.axis == SweepAxis::HAMILTONIAN) {
        if (!v.is_string()) config_fail(path, "must be a Hamiltonian file path");
        sw.hamiltonians.push_back(resolve(base_dir, v.get<std::string>()));
      } else {
        if (!v.is_number()) config_fail(path, "must be a number");
        const double x = v.get<double>();
        if (sw.axis == SweepAxis::TH_P && !(x > 0.0 && x <= 1.0)) config_fail(path, "th_p must lie in (0, 1]");
        if (sw.axis == SweepAxis::K && !(x >= 1.0 && std::floor(x) == x)) config_fail(path, "K must be a positive integer");
        sw.values.push_back(x);
      }
    }
    cfg.sweep = sw;
  }

  if (cfg.hamiltonians.empty() && !(cfg.sweep && cfg.sweep->axis == SweepAxis::HAMILTONIAN)) {
    config_fail("$.hamiltonian", "a Hamiltonian file is required");
  }
  auto check_file = [](const fs::path& p, const std::string& path) {
    if (!fs::exists(p)) config_fail(path, "file not found: " + p.string());
  };
  for (const auto& h : cfg.hamiltonians) check_file(h, "$.hamiltonian");
  if (cfg.sweep) {
    for (std::size_t i = 0; i < cfg.sweep->hamiltonians.size(); ++i) {
      check_file(cfg.sweep->hamiltonians[i], fmt::format("$.sweep.values[{}]", i));
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError(path.string() + ": config file not found");
  json j;
  try {
    j = read_json(path);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment_config(j, path.parent_path());
}

ExperimentSetup make_setup(const ExperimentConfig& cfg, const ControllerConfig& controller,
                           const fs::path& hamiltonian_path) {
  ExperimentSetup s;
  s.hamiltonian = load_hamiltonian(hamiltonian_path.string());
  s.ansatz = {cfg.ansatz_kind, s.hamiltonian.qubit_count(), cfg.ansatz_reps};
  s.controller = controller;
  s.spsa = cfg.optimizer;
  s.initial_theta = cfg.initial_theta;
  s.iterations = cfg.iterations;
  s.shots = cfg.shots == 0 ? ShotBudget::exact() : ShotBudget::shots(cfg.shots);
  s.seed = cfg.seed;
  s.max_jobs = cfg.max_jobs > 0 ? cfg.max_jobs : 10 * cfg.iterations + 100;
  if (s.hamiltonian.qubit_count() <= kMaxDenseQubits) s.ground_energy = ground_state_energy(s.hamiltonian);

  if (cfg.trace_path) {
    s.trace = load_trace(cfg.trace_path->string());
  } else if (cfg.noise) {
    NoiseConfig nc = *cfg.noise;
    if (!cfg.noise_horizon_set) nc.horizon_jobs = s.max_jobs;
    if (!cfg.noise_scale_set) {
      nc.energy_scale = s.ground_energy && std::abs(*s.ground_energy) > 0.0
                            ? std::abs(*s.ground_energy)
                            : s.hamiltonian.abs_coefficient_sum();
    }
    s.trace = generate_trace(nc);
  }
  return s;
}

std::optional<double> progress_quality(const RunRecord& r) {
  const auto& s = r.summary;
  if (!r.ground_energy || !s.first_accepted_energy || !s.final_energy) return std::nullopt;
  const double room = *s.first_accepted_energy - *r.ground_energy;
  if (room == 0.0) return std::nullopt;
  return (*s.first_accepted_energy - *s.final_energy) / room;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json run_metrics(const RunRecord& r) {
  const auto& s = r.summary;
  std::optional<double> error;
  if (r.ground_energy && s.final_energy) error = std::abs(*s.final_energy - *r.ground_energy);
  std::optional<double> exact_error;
  if (r.ground_energy && s.final_exact_energy) exact_error = std::abs(*s.final_exact_energy - *r.ground_energy);
  json series = json::array();
  for (const auto& e : r.jobs) series.push_back(opt(e.accepted_energy));
  return {{"label", r.controller.label()},
          {"controller", controller_config_to_json(r.controller)},
          {"final_energy", opt(s.final_energy)},
          {"final_exact_energy", opt(s.final_exact_energy)},
          {"final_error", opt(error)},
          {"final_exact_error", opt(exact_error)},
          {"first_accepted_energy", opt(s.first_accepted_energy)},
          {"Q", opt(progress_quality(r))},
          {"accepted_iterations", s.accepted_iterations},
          {"jobs", s.jobs},
          {"skip_count", s.skip_count},
          {"refresh_count", s.refresh_count},
          {"prime_count", r.prime_count},
          {"minor_count", r.minor_count},
          {"s1_circuits", s.total_s1},
          {"s2_circuits", s.total_s2},
          {"total_circuits", s.total_circuits},
          {"truncated", s.truncated},
          {"energy_series", series}};
}

}  // namespace

json compare_records(const std::vector<RunRecord>& records) {
  if (records.size() < 2) throw MismatchError("a comparison needs at least two runs");
  const auto& ref = records.front();
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    auto refuse = [&](const std::string& what) {
      throw MismatchError("run '" + r.controller.label() + "' does not share the " + what + " of run '" +
                          ref.controller.label() + "'");
    };
    if (r.trace_fingerprint != ref.trace_fingerprint) refuse("drift trace");
    if (r.seed != ref.seed) refuse("seed");
    if (r.hamiltonian_text != ref.hamiltonian_text) refuse("Hamiltonian");
    if (r.ansatz.kind != ref.ansatz.kind || r.ansatz.reps != ref.ansatz.reps ||
        r.ansatz.qubit_count != ref.ansatz.qubit_count) {
      refuse("ansatz");
    }
  }
  json runs = json::array();
  for (const auto& r : records) runs.push_back(run_metrics(r));
  json factors = json::array();
  for (std::size_t a = 0; a < records.size(); ++a) {
    for (std::size_t b = 0; b < records.size(); ++b) {
      if (a == b) continue;
      const auto qa = progress_quality(records[a]);
      const auto qb = progress_quality(records[b]);
      std::optional<double> factor;
      if (qa && qb && *qb != 0.0) factor = *qa / *qb;
      factors.push_back({{"a", records[a].controller.label()},
                         {"b", records[b].controller.label()},
                         {"factor", opt(factor)}});
    }
  }
  return {{"format", "driftskip-compare/1"},
          {"seed", ref.seed},
          {"trace_fingerprint", fmt::format("{:016x}", ref.trace_fingerprint)},
          {"ground_energy", opt(ref.ground_energy)},
          {"runs", runs},
          {"improvement_factors", factors}};
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::TH_P: return "th_p";
    case SweepAxis::K: return "K";
    case SweepAxis::HAMILTONIAN: return "hamiltonian";
  }
  return "?";
}

namespace {

std::int64_t steady_s1_per_job(const RunRecord& r) {
  std::size_t refs = 0;
  switch (r.controller.kind) {
    case ControllerKind::BASELINE: refs = 0; break;
    case ControllerKind::QISMET: refs = 1; break;
    case ControllerKind::DISQ: refs = r.controller.K; break;
  }
  return stage1_circuit_count(refs, r.prime_count);
}

std::int64_t observed_max_s1(const RunRecord& r) {
  std::int64_t m = 0;
  for (const auto& e : r.jobs) m = std::max(m, e.s1_circuits);
  return m;
}

}  // namespace

json sweep_report(SweepAxis axis, const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    const auto& r = row.record;
    const auto& s = r.summary;
    out.push_back({{"axis_value", row.axis_value},
                   {"label", r.controller.label()},
                   {"K", r.controller.K},
                   {"th_p", r.controller.th_p},
                   {"prime_count", r.prime_count},
                   {"minor_count", r.minor_count},
                   {"s1_per_job", steady_s1_per_job(r)},
                   {"max_s1_observed", observed_max_s1(r)},
                   {"s2_per_accept", stage2_circuit_count(r.minor_count)},
                   {"final_energy", opt(s.final_energy)},
                   {"final_exact_energy", opt(s.final_exact_energy)},
                   {"ground_energy", opt(r.ground_energy)},
                   {"Q", opt(progress_quality(r))},
                   {"skip_count", s.skip_count},
                   {"total_circuits", s.total_circuits}});
  }
  return {{"format", "driftskip-sweep/1"}, {"axis", sweep_axis_name(axis)}, {"rows", out}};
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  auto num = [](const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string{}; };
  std::string out = fmt::format(
      "{},label,prime_count,minor_count,s1_per_job,final_energy,final_exact_energy,ground_energy,"
      "skip_count,total_circuits\n",
      sweep_axis_name(axis));
  for (const auto& row : rows) {
    const auto& r = row.record;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", row.axis_value, r.controller.label(),
                       r.prime_count, r.minor_count, steady_s1_per_job(r), num(r.summary.final_energy),
                       num(r.summary.final_exact_energy), num(r.ground_energy), r.summary.skip_count,
                       r.summary.total_circuits);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

}  // namespace driftskip
