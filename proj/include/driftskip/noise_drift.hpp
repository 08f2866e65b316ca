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

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace driftskip {

enum class DriftShape : std::uint8_t { STEP = 0, SPIKE = 1, RAMP = 2, RANDOM_WALK = 3 };
inline constexpr std::size_t kDriftShapeCount = 4;

std::string drift_shape_name(DriftShape shape);
DriftShape parse_drift_shape(const std::string& name);

/// One drift event. Magnitude is a fraction of the configured energy scale.
///
///   STEP         constant `magnitude` over the window
///   SPIKE        `magnitude` at the first job, decaying linearly to zero
///   RAMP         rising linearly to `magnitude` at the last job
///   RANDOM_WALK  Gaussian walk with per-job step magnitude/sqrt(duration)
struct DriftEpisode {
  std::int64_t start_job = 0;
  std::int64_t duration_jobs = 1;
  double magnitude = 0.0;
  DriftShape shape = DriftShape::STEP;

  friend bool operator==(const DriftEpisode&, const DriftEpisode&) = default;
};

/// Random episode generation for one shape. A new episode starts at each
/// job with probability `rate`.
struct EpisodeProfile {
  double rate = 0.0;
  double magnitude_min = 0.0;
  double magnitude_max = 0.0;
  std::int64_t duration_min = 1;
  std::int64_t duration_max = 1;

  friend bool operator==(const EpisodeProfile&, const EpisodeProfile&) = default;
};

enum class DriftScope : std::uint8_t { GLOBAL, PER_CIRCUIT };

struct NoiseConfig {
  std::int64_t horizon_jobs = 1;
  std::uint64_t seed = 0;
  double baseline_std = 0.0;
  std::array<EpisodeProfile, kDriftShapeCount> profiles{};
  /// Draw each random episode's sign uniformly instead of always positive.
  bool random_sign = false;
  /// Episodes placed verbatim in addition to the random ones.
  std::vector<DriftEpisode> scripted;
  double energy_scale = 1.0;
  /// When positive, offsets are affinely rescaled so that max - min equals
  /// this value with the mean preserved.
  double target_range = 0.0;
  /// Independent per-circuit jitter (fraction of energy scale). Zero keeps
  /// the drift a pure per-job landscape shift.
  double circuit_jitter_std = 0.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct DriftTrace {
  NoiseConfig config;
  std::vector<DriftEpisode> episodes;
  std::vector<double> offsets;

  std::uint64_t seed() const { return config.seed; }
  std::int64_t horizon() const { return static_cast<std::int64_t>(offsets.size()); }
  /// True when some episode covers `job`.
  bool episode_active(std::int64_t job) const;
  /// FNV-1a over the offset bit patterns. Two traces with equal fingerprints
  /// drive identical landscapes.
  std::uint64_t fingerprint() const;

  friend bool operator==(const DriftTrace&, const DriftTrace&) = default;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contribution of a single episode, indexed by job over the horizon.
std::vector<double> episode_offsets(const DriftEpisode& ep, std::int64_t horizon,
                                    std::uint64_t trace_seed);

DriftTrace generate_trace(const NoiseConfig& cfg);

/// ideal + offsets[job] * energy_scale.
double apply_drift(double ideal, const DriftTrace& trace, std::int64_t job, double energy_scale);

void save_trace(const DriftTrace& trace, const std::string& path);
DriftTrace load_trace(const std::string& path);

nlohmann::json noise_config_to_json(const NoiseConfig& cfg);
NoiseConfig noise_config_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const DriftTrace& trace);
DriftTrace trace_from_json(const nlohmann::json& j);

}  // namespace driftskip
