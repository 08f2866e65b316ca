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
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftskip/noise_drift.hpp"
#include "driftskip/pauli.hpp"
#include "driftskip/spsa.hpp"
#include "driftskip/statevector.hpp"

namespace driftskip {

enum class ControllerKind { BASELINE, QISMET, DISQ };
enum class Decision { ACCEPT, RESCHEDULE };

std::string controller_kind_name(ControllerKind kind);
ControllerKind parse_controller_kind(const std::string& name);
std::string decision_name(Decision d);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::DISQ;
  std::size_t K = 2;
  double th_p = 0.8;
  /// Consecutive reschedules after which reference energies are refreshed.
  std::int64_t sigma = 5;
  /// Per-reference weights, most recent first. Empty means 1/K each.
  std::vector<double> weights;
  /// QISMET only: additionally reject when |G - Gf| > tolerance * |G|.
  std::optional<double> qismet_tolerance;
  /// QISMET only: the tolerance test alone decides, without sign agreement.
  /// For tolerances below 1 the two variants agree.
  bool qismet_tolerance_replaces_sign = false;
  /// Free-form label used in reports; defaults to the kind name.
  std::string name;

  void validate() const;
  std::string label() const;
};

struct ReferenceRecord {
  std::int64_t iteration_index = 0;
  PerturbationPair params;
  double recorded_prime_energy = 0.0;
};

/// The K most recent accepted iterations, most recent first.
class ReferenceWindow {
 public:
  /// `weights` must have `capacity` entries summing to 1, or be empty for
  /// uniform weights.
  explicit ReferenceWindow(std::size_t capacity, std::vector<double> weights = {});

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::deque<ReferenceRecord>& records() const { return records_; }
  const ReferenceRecord& operator[](std::size_t n) const { return records_[n]; }

  /// Weights of the records currently held. While the window is still
  /// filling, the leading configured weights are renormalized to sum to 1.
  std::vector<double> active_weights() const;
  std::vector<double> recorded_energies() const;

  /// Inserts at the front and evicts the oldest record beyond capacity.
  void push(ReferenceRecord record);
  /// Overwrites every recorded energy with the matching rerun.
  void refresh(std::span<const double> reruns);

 private:
  std::size_t capacity_;
  std::vector<double> weights_;
  std::deque<ReferenceRecord> records_;
};

struct DetectionResult {
  /// False for warm-up jobs and for the baseline, which never detect.
  bool detected = false;
  double D = 0.0;
  double Ef = 0.0;
  double Gf = 0.0;
  double G = 0.0;
  Decision decision = Decision::ACCEPT;
};

/// Multi-reference detection on prime-subset energies:
///   D  = sum_n c_n (Er_n - E_n)
///   Ef = E_i - D
///   Gf = Ef - sum_n c_n E_n
///   G  = E_i - sum_n c_n E_n
/// ACCEPT iff G * Gf > 0. An empty reference set auto-accepts.
DetectionResult detect_drift(std::span<const double> weights, std::span<const double> recorded,
                             double current_energy, std::span<const double> reruns);
DetectionResult detect_drift(const ReferenceWindow& window, double current_energy,
                             std::span<const double> reruns);

/// Single-reference full-Hamiltonian detection:
///   N = Er_prev - E_prev, Ef = E_i - N, Gf = Ef - E_prev, G = E_i - E_prev.
/// With `tolerance`, acceptance also needs |G - Gf| <= tolerance * |G|, or
/// needs only that when `replaces_sign` is set.
DetectionResult qismet_detect(double previous_energy, double current_energy,
                              double previous_rerun, std::optional<double> tolerance = std::nullopt,
                              bool replaces_sign = false);

/// Energies gathered in stage S1 of one job.
struct Stage1Result {
  double prime_plus = 0.0;
  double prime_minus = 0.0;
  /// Mean of the two perturbations, E_i(P).
  double prime_energy = 0.0;
  /// Er for each reference, most recent first.
  std::vector<double> reference_energies;
  std::int64_t circuits = 0;
};

struct Stage2Result {
  double minor_plus = 0.0;
  double minor_minus = 0.0;
  double minor_energy = 0.0;
  /// Full energies handed to the optimizer.
  double total_plus = 0.0;
  double total_minus = 0.0;
  std::int64_t circuits = 0;
};

struct JobEntry {
  std::int64_t job = 0;
  std::int64_t iteration = 0;
  Stage1Result stage1;
  std::vector<double> recorded_energies;
  std::vector<double> weights;
  DetectionResult detection;
  std::optional<Stage2Result> stage2;
  std::int64_t s1_circuits = 0;
  std::int64_t s2_circuits = 0;
  double offset = 0.0;
  /// Set on ACCEPT: mean of the two total energies.
  std::optional<double> accepted_energy;
  /// True when this job hit max-out and refreshed the reference energies.
  bool refreshed = false;
};

struct RunSummary {
  std::optional<double> first_accepted_energy;
  std::optional<double> final_energy;
  /// Drift-free analytic energy at the final parameters.
  std::optional<double> final_exact_energy;
  std::int64_t accepted_iterations = 0;
  std::int64_t jobs = 0;
  std::int64_t skip_count = 0;
  std::int64_t refresh_count = 0;
  std::int64_t total_s1 = 0;
  std::int64_t total_s2 = 0;
  std::int64_t total_circuits = 0;
  /// Job cap or trace horizon reached before the iteration budget.
  bool truncated = false;
};

struct RunRecord {
  ControllerConfig controller;
  std::uint64_t seed = 0;
  std::string hamiltonian_text;
  AnsatzSpec ansatz;
  std::uint64_t shots = 0;  // 0 = exact
  std::uint64_t trace_fingerprint = 0;
  std::optional<double> ground_energy;
  std::size_t prime_count = 0;
  std::size_t minor_count = 0;
  std::int64_t iteration_budget = 0;
  std::vector<JobEntry> jobs;
  RunSummary summary;
  std::vector<double> final_theta;
};

/// Everything needed to run one controller.
struct ExperimentSetup {
  Hamiltonian hamiltonian;
  AnsatzSpec ansatz;
  /// Empty offsets mean a drift-free landscape of unbounded horizon.
  DriftTrace trace;
  ControllerConfig controller;
  SpsaConfig spsa;
  /// Empty draws uniform angles in [-pi, pi) from the optimizer seed.
  std::vector<double> initial_theta;
  std::int64_t iterations = 0;
  ShotBudget shots = ShotBudget::exact();
  std::uint64_t seed = 0;
  /// 0 means 10 * iterations + 100.
  std::int64_t max_jobs = 0;
  std::optional<double> ground_energy;
};

/// Executes observable circuits for one run: sampling seeds, drift
/// injection and circuit counting.
class CircuitExecutor {
 public:
  CircuitExecutor(const Hamiltonian& h, const Circuit& ansatz, const DriftTrace& trace,
                  ShotBudget shots, std::uint64_t seed);

  /// Energy of `terms` at `params` inside `job`. `slot` separates the
  /// parameter points evaluated in one job so their samples are independent.
  double subset_energy(std::span<const PauliTerm> terms, std::span<const double> params,
                       std::int64_t job, std::uint64_t slot);

  double offset(std::int64_t job) const;
  /// Jobs the trace can serve; max int64 when drift-free.
  std::int64_t horizon() const;
  std::int64_t circuits_executed() const { return circuits_; }

 private:
  std::size_t term_index(const PauliString& p) const;

  std::vector<PauliTerm> all_terms_;
  const Circuit& ansatz_;
  const DriftTrace& trace_;
  ShotBudget shots_;
  std::uint64_t seed_;
  double abs_sum_;
  std::int64_t circuits_ = 0;
};

/// The iteration loop: staged jobs, detection, the accept/reschedule policy
/// and the reference database.
class VqaController {
 public:
  explicit VqaController(const ExperimentSetup& setup);

  const SubsetPartition& partition() const { return partition_; }
  const ReferenceWindow& window() const { return window_; }
  const SpsaOptimizer& optimizer() const { return optimizer_; }
  std::int64_t iteration() const { return iteration_; }
  std::int64_t reschedule_streak() const { return reschedule_streak_; }
  std::int64_t next_job() const { return job_; }

  Stage1Result run_stage1();
  DetectionResult detect(const Stage1Result& s1) const;
  /// Throws ProtocolError unless `detection` accepted.
  Stage2Result run_stage2(const DetectionResult& detection);

  /// Runs one full job and applies its transition.
  JobEntry step();

  bool can_run_job() const;

 private:
  const ExperimentSetup& setup_;
  Circuit circuit_;
  SubsetPartition partition_;
  CircuitExecutor executor_;
  ReferenceWindow window_;
  SpsaOptimizer optimizer_;
  std::int64_t iteration_ = 0;
  std::int64_t reschedule_streak_ = 0;
  std::int64_t job_ = 0;
  std::int64_t max_jobs_;
};

std::vector<double> initial_parameters(const ExperimentSetup& setup);

RunRecord run_experiment(const ExperimentSetup& setup);

/// Closed-form S1 circuits for a job with `references` active references.
inline std::int64_t stage1_circuit_count(std::size_t references, std::size_t prime) {
  return static_cast<std::int64_t>((references + 1) * prime * 2);
}
inline std::int64_t stage2_circuit_count(std::size_t minor) {
  return static_cast<std::int64_t>(minor * 2);
}

nlohmann::json controller_config_to_json(const ControllerConfig& cfg);
ControllerConfig controller_config_from_json(const nlohmann::json& j);
nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

/// Header: job,iteration,controller,energy,D,Ef,Gf,G,decision,s1_circuits,s2_circuits,offset
std::string run_record_csv(const RunRecord& record);
inline constexpr const char* kCsvHeader =
    "job,iteration,controller,energy,D,Ef,Gf,G,decision,s1_circuits,s2_circuits,offset";

}  // namespace driftskip
