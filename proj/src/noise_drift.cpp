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

#include "driftskip/noise_drift.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "driftskip/statevector.hpp"

namespace driftskip {

using nlohmann::json;

std::string drift_shape_name(DriftShape shape) {
  switch (shape) {
    case DriftShape::STEP: return "STEP";
    case DriftShape::SPIKE: return "SPIKE";
    case DriftShape::RAMP: return "RAMP";
    case DriftShape::RANDOM_WALK: return "RANDOM_WALK";
  }
  return "?";
}

DriftShape parse_drift_shape(const std::string& name) {
  for (std::size_t s = 0; s < kDriftShapeCount; ++s) {
    if (drift_shape_name(static_cast<DriftShape>(s)) == name) return static_cast<DriftShape>(s);
  }
  throw std::invalid_argument("unknown drift shape '" + name + "'");
}

void NoiseConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("noise." + field + ": " + why);
  };
  if (horizon_jobs < 1) fail("horizon_jobs", "must be positive");
  if (!(baseline_std >= 0.0)) fail("baseline_std", "must be >= 0");
  if (!(energy_scale > 0.0)) fail("energy_scale", "must be > 0");
  if (!(target_range >= 0.0)) fail("target_range", "must be >= 0");
  if (!(circuit_jitter_std >= 0.0)) fail("circuit_jitter_std", "must be >= 0");
  for (std::size_t s = 0; s < kDriftShapeCount; ++s) {
    const auto& p = profiles[s];
    const std::string name = "episodes." + drift_shape_name(static_cast<DriftShape>(s));
    if (!(p.rate >= 0.0 && p.rate <= 1.0)) fail(name + ".rate", "must lie in [0, 1]");
    if (!(p.magnitude_min <= p.magnitude_max)) fail(name + ".magnitude", "range is not ordered");
    if (p.duration_min < 1 || p.duration_min > p.duration_max) {
      fail(name + ".duration", "range must be ordered and >= 1");
    }
  }
  for (std::size_t i = 0; i < scripted.size(); ++i) {
    if (scripted[i].duration_jobs < 1) fail("scripted[" + std::to_string(i) + "].duration_jobs", "must be >= 1");
    if (!std::isfinite(scripted[i].magnitude)) fail("scripted[" + std::to_string(i) + "].magnitude", "must be finite");
  }
}

bool DriftTrace::episode_active(std::int64_t job) const {
  return std::any_of(episodes.begin(), episodes.end(), [&](const DriftEpisode& e) {
    return job >= e.start_job && job < e.start_job + e.duration_jobs;
  });
}

std::uint64_t DriftTrace::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : offsets) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::vector<double> episode_offsets(const DriftEpisode& ep, std::int64_t horizon,
                                    std::uint64_t trace_seed) {
  std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)), 0.0);
  const double dur = static_cast<double>(ep.duration_jobs);
  // The walk's stream depends on the episode itself, not on its position in
  // the episode list.
  std::uint64_t walk_seed = mix_seed(trace_seed, static_cast<std::uint64_t>(ep.start_job));
  walk_seed = mix_seed(walk_seed, static_cast<std::uint64_t>(ep.duration_jobs));
  walk_seed = mix_seed(walk_seed, std::bit_cast<std::uint64_t>(ep.magnitude));
  std::mt19937_64 rng(walk_seed);
  std::normal_distribution<double> step(0.0, ep.magnitude / std::sqrt(dur));
  double walk = 0.0;
  for (std::int64_t k = 0; k < ep.duration_jobs; ++k) {
    const std::int64_t job = ep.start_job + k;
    double v = 0.0;
    switch (ep.shape) {
      case DriftShape::STEP: v = ep.magnitude; break;
      case DriftShape::SPIKE: v = ep.magnitude * (1.0 - static_cast<double>(k) / dur); break;
      case DriftShape::RAMP: v = ep.magnitude * static_cast<double>(k + 1) / dur; break;
      case DriftShape::RANDOM_WALK:
        walk += step(rng);
        v = walk;
        break;
    }
    if (job >= 0 && job < horizon) out[static_cast<std::size_t>(job)] = v;
  }
  return out;
}

DriftTrace generate_trace(const NoiseConfig& cfg) {
  cfg.validate();
  DriftTrace trace;
  trace.config = cfg;
  const auto horizon = cfg.horizon_jobs;
  trace.offsets.assign(static_cast<std::size_t>(horizon), 0.0);

  std::mt19937_64 episode_rng(mix_seed(cfg.seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < kDriftShapeCount; ++s) {
    const auto& p = cfg.profiles[s];
    if (p.rate <= 0.0) continue;
    for (std::int64_t job = 0; job < horizon; ++job) {
      if (unit(episode_rng) >= p.rate) continue;
      DriftEpisode ep;
      ep.shape = static_cast<DriftShape>(s);
      ep.start_job = job;
      ep.duration_jobs = std::uniform_int_distribution<std::int64_t>(p.duration_min, p.duration_max)(episode_rng);
      ep.magnitude = p.magnitude_min + (p.magnitude_max - p.magnitude_min) * unit(episode_rng);
      if (cfg.random_sign && unit(episode_rng) < 0.5) ep.magnitude = -ep.magnitude;
      trace.episodes.push_back(ep);
    }
  }
  trace.episodes.insert(trace.episodes.end(), cfg.scripted.begin(), cfg.scripted.end());

  for (const auto& ep : trace.episodes) {
    const auto contrib = episode_offsets(ep, horizon, cfg.seed);
    for (std::size_t j = 0; j < contrib.size(); ++j) trace.offsets[j] += contrib[j];
  }

  if (cfg.baseline_std > 0.0) {
    std::mt19937_64 jitter_rng(mix_seed(cfg.seed, 2));
    std::normal_distribution<double> jitter(0.0, cfg.baseline_std);
    for (auto& v : trace.offsets) v += jitter(jitter_rng);
  }

  if (cfg.target_range > 0.0) {
    const auto [lo, hi] = std::minmax_element(trace.offsets.begin(), trace.offsets.end());
    const double range = *hi - *lo;
    if (range > 0.0) {
      double mean = 0.0;
      for (double v : trace.offsets) mean += v;
      mean /= static_cast<double>(trace.offsets.size());
      const double k = cfg.target_range / range;
      for (auto& v : trace.offsets) v = mean + (v - mean) * k;
    }
  }
  return trace;
}

double apply_drift(double ideal, const DriftTrace& trace, std::int64_t job, double energy_scale) {
  if (job < 0 || job >= trace.horizon()) {
    throw std::out_of_range("job " + std::to_string(job) + " outside drift horizon of " +
                            std::to_string(trace.horizon()) + " jobs");
  }
  return ideal + trace.offsets[static_cast<std::size_t>(job)] * energy_scale;
}

json noise_config_to_json(const NoiseConfig& cfg) {
  json episodes = json::object();
  for (std::size_t s = 0; s < kDriftShapeCount; ++s) {
    const auto& p = cfg.profiles[s];
    episodes[drift_shape_name(static_cast<DriftShape>(s))] = {
        {"rate", p.rate},
        {"magnitude", {p.magnitude_min, p.magnitude_max}},
        {"duration", {p.duration_min, p.duration_max}}};
  }
  json scripted = json::array();
  for (const auto& e : cfg.scripted) {
    scripted.push_back({{"start_job", e.start_job},
                        {"duration_jobs", e.duration_jobs},
                        {"magnitude", e.magnitude},
                        {"shape", drift_shape_name(e.shape)}});
  }
  return {{"horizon_jobs", cfg.horizon_jobs},
          {"seed", cfg.seed},
          {"baseline_std", cfg.baseline_std},
          {"episodes", episodes},
          {"random_sign", cfg.random_sign},
          {"scripted", scripted},
          {"energy_scale", cfg.energy_scale},
          {"target_range", cfg.target_range},
          {"circuit_jitter_std", cfg.circuit_jitter_std}};
}

namespace {

DriftEpisode episode_from_json(const json& e) {
  DriftEpisode ep;
  ep.start_job = e.at("start_job").get<std::int64_t>();
  ep.duration_jobs = e.at("duration_jobs").get<std::int64_t>();
  ep.magnitude = e.at("magnitude").get<double>();
  ep.shape = parse_drift_shape(e.at("shape").get<std::string>());
  return ep;
}

json episode_to_json(const DriftEpisode& e) {
  return {{"start_job", e.start_job},
          {"duration_jobs", e.duration_jobs},
          {"magnitude", e.magnitude},
          {"shape", drift_shape_name(e.shape)}};
}

}  // namespace

NoiseConfig noise_config_from_json(const json& j) {
  NoiseConfig cfg;
  cfg.horizon_jobs = j.value("horizon_jobs", std::int64_t{1});
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.baseline_std = j.value("baseline_std", 0.0);
  cfg.random_sign = j.value("random_sign", false);
  cfg.energy_scale = j.value("energy_scale", 1.0);
  cfg.target_range = j.value("target_range", 0.0);
  cfg.circuit_jitter_std = j.value("circuit_jitter_std", 0.0);
  if (j.contains("episodes")) {
    for (const auto& [name, p] : j.at("episodes").items()) {
      auto& prof = cfg.profiles[static_cast<std::size_t>(parse_drift_shape(name))];
      prof.rate = p.value("rate", 0.0);
      if (p.contains("magnitude")) {
        prof.magnitude_min = p.at("magnitude").at(0).get<double>();
        prof.magnitude_max = p.at("magnitude").at(1).get<double>();
      }
      if (p.contains("duration")) {
        prof.duration_min = p.at("duration").at(0).get<std::int64_t>();
        prof.duration_max = p.at("duration").at(1).get<std::int64_t>();
      }
    }
  }
  if (j.contains("scripted")) {
    for (const auto& e : j.at("scripted")) cfg.scripted.push_back(episode_from_json(e));
  }
  cfg.validate();
  return cfg;
}

json trace_to_json(const DriftTrace& trace) {
  json episodes = json::array();
  for (const auto& e : trace.episodes) episodes.push_back(episode_to_json(e));
  return {{"format", "driftskip-trace/1"},
          {"seed", trace.config.seed},
          {"config", noise_config_to_json(trace.config)},
          {"episodes", episodes},
          {"offsets", trace.offsets}};
}

DriftTrace trace_from_json(const json& j) {
  try {
    DriftTrace trace;
    trace.config = noise_config_from_json(j.at("config"));
    if (j.at("seed").get<std::uint64_t>() != trace.config.seed) {
      throw TraceFormatError("trace seed disagrees with its embedded config");
    }
    for (const auto& e : j.at("episodes")) trace.episodes.push_back(episode_from_json(e));
    trace.offsets = j.at("offsets").get<std::vector<double>>();
    if (static_cast<std::int64_t>(trace.offsets.size()) != trace.config.horizon_jobs) {
      throw TraceFormatError("trace has " + std::to_string(trace.offsets.size()) +
                             " offsets, config horizon is " +
                             std::to_string(trace.config.horizon_jobs));
    }
    return trace;
  } catch (const json::exception& e) {
    throw TraceFormatError(std::string("malformed trace: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TraceFormatError(std::string("malformed trace: ") + e.what());
  }
}

void save_trace(const DriftTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << trace_to_json(trace).dump(1) << '\n';
}

DriftTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw TraceFormatError(path + ": " + e.what());
  }
  return trace_from_json(j);
}

}  // namespace driftskip
