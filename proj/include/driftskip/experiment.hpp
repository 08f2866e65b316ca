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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftskip/runtime.hpp"

namespace driftskip {

/// Error raised while validating an experiment config; the message starts
/// with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when runs that are about to be compared do not share their
/// Hamiltonian, ansatz, seed or drift trace.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { TH_P, K, HAMILTONIAN };

struct SweepSpec {
  SweepAxis axis = SweepAxis::TH_P;
  std::vector<double> values;
  std::vector<std::filesystem::path> hamiltonians;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> hamiltonians;
  std::size_t ansatz_reps = 2;
  AnsatzKind ansatz_kind = AnsatzKind::RA;
  std::vector<ControllerConfig> controllers;
  SpsaConfig optimizer;
  bool optimizer_seed_set = false;
  std::optional<NoiseConfig> noise;
  bool noise_seed_set = false;
  bool noise_scale_set = false;
  bool noise_horizon_set = false;
  std::optional<std::filesystem::path> trace_path;
  std::int64_t iterations = 1;
  std::uint64_t shots = 8192;  // 0 = exact
  std::uint64_t seed = 0;
  std::int64_t max_jobs = 0;
  std::vector<double> initial_theta;
  std::filesystem::path output = "out";
  std::optional<SweepSpec> sweep;

  /// --seed: reseeds the run, the optimizer and the noise generator.
  void override_seed(std::uint64_t s);
};

/// Parses a JSON config. Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Builds the setup for one controller on one Hamiltonian, generating or
/// loading the drift trace.
ExperimentSetup make_setup(const ExperimentConfig& cfg, const ControllerConfig& controller,
                           const std::filesystem::path& hamiltonian_path);

/// Q = (E_first - E_final) / (E_first - E_ground). Null without a ground
/// energy, an accepted iteration, or progress room.
std::optional<double> progress_quality(const RunRecord& r);

/// Per-run metrics and pairwise improvement factors Q_a / Q_b. Throws
/// MismatchError unless all runs share Hamiltonian, ansatz, seed and trace.
nlohmann::json compare_records(const std::vector<RunRecord>& records);

struct SweepRow {
  std::string axis_value;
  RunRecord record;
};

nlohmann::json sweep_report(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string sweep_axis_name(SweepAxis axis);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace driftskip
