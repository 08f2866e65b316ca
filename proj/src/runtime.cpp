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

#include "driftskip/runtime.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace driftskip {

using nlohmann::json;

std::string controller_kind_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::BASELINE: return "BASELINE";
    case ControllerKind::QISMET: return "QISMET";
    case ControllerKind::DISQ: return "DISQ";
  }
  return "?";
}

ControllerKind parse_controller_kind(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
  if (upper == "BASELINE") return ControllerKind::BASELINE;
  if (upper == "QISMET") return ControllerKind::QISMET;
  if (upper == "DISQ") return ControllerKind::DISQ;
  throw std::invalid_argument("unknown controller kind '" + name +
                              "' (expected BASELINE, QISMET or DISQ)");
}

std::string decision_name(Decision d) { return d == Decision::ACCEPT ? "ACCEPT" : "RESCHEDULE"; }

void ControllerConfig::validate() const {
  if (K < 1) throw std::invalid_argument("controller.K must be >= 1");
  if (sigma < 1) throw std::invalid_argument("controller.sigma must be >= 1");
  if (!(th_p > 0.0 && th_p <= 1.0)) throw std::invalid_argument("controller.th_p must lie in (0, 1]");
  if (!weights.empty()) {
    if (weights.size() != K) {
      throw std::invalid_argument("controller.weights must have K = " + std::to_string(K) + " entries");
    }
    double s = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("controller.weights must be non-negative");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("controller.weights must sum to 1");
  }
  if (qismet_tolerance && !(*qismet_tolerance >= 0.0)) {
    throw std::invalid_argument("controller.qismet_tolerance must be >= 0");
  }
}

std::string ControllerConfig::label() const {
  return name.empty() ? controller_kind_name(kind) : name;
}

// ---------------------------------------------------------------------------
// Reference window

ReferenceWindow::ReferenceWindow(std::size_t capacity, std::vector<double> weights)
    : capacity_(capacity), weights_(std::move(weights)) {
  if (weights_.empty()) {
    weights_.assign(capacity_, capacity_ ? 1.0 / static_cast<double>(capacity_) : 0.0);
  }
  if (weights_.size() != capacity_) {
    throw std::invalid_argument("reference weights must match the window capacity");
  }
}

std::vector<double> ReferenceWindow::active_weights() const {
  const std::size_t n = records_.size();
  if (n == capacity_) return weights_;
  std::vector<double> w(weights_.begin(), weights_.begin() + static_cast<std::ptrdiff_t>(n));
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  if (s > 0.0) {
    for (auto& v : w) v /= s;
  } else {
    for (auto& v : w) v = 1.0 / static_cast<double>(n);
  }
  return w;
}

std::vector<double> ReferenceWindow::recorded_energies() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.recorded_prime_energy);
  return out;
}

void ReferenceWindow::push(ReferenceRecord record) {
  if (capacity_ == 0) return;
  if (!std::isfinite(record.recorded_prime_energy)) {
    throw std::invalid_argument("reference energy must be finite");
  }
  records_.push_front(std::move(record));
  while (records_.size() > capacity_) records_.pop_back();
}

void ReferenceWindow::refresh(std::span<const double> reruns) {
  if (reruns.size() != records_.size()) {
    throw std::invalid_argument("refresh needs one rerun energy per reference");
  }
  for (std::size_t n = 0; n < records_.size(); ++n) records_[n].recorded_prime_energy = reruns[n];
}

// ---------------------------------------------------------------------------
// Detection

DetectionResult detect_drift(std::span<const double> weights, std::span<const double> recorded,
                             double current_energy, std::span<const double> reruns) {
  if (weights.size() != recorded.size() || reruns.size() != recorded.size()) {
    throw std::invalid_argument("detection needs matching weights, recorded and rerun energies");
  }
  DetectionResult r;
  if (recorded.empty()) {
    r.Ef = current_energy;
    return r;
  }
  double drift = 0.0;
  double reference = 0.0;
  for (std::size_t n = 0; n < recorded.size(); ++n) {
    drift += weights[n] * (reruns[n] - recorded[n]);
    reference += weights[n] * recorded[n];
  }
  r.detected = true;
  r.D = drift;
  r.Ef = current_energy - drift;
  r.Gf = r.Ef - reference;
  r.G = current_energy - reference;
  r.decision = (r.G * r.Gf > 0.0) ? Decision::ACCEPT : Decision::RESCHEDULE;
  return r;
}

DetectionResult detect_drift(const ReferenceWindow& window, double current_energy,
                             std::span<const double> reruns) {
  const auto w = window.active_weights();
  const auto rec = window.recorded_energies();
  return detect_drift(w, rec, current_energy, reruns);
}

DetectionResult qismet_detect(double previous_energy, double current_energy,
                              double previous_rerun, std::optional<double> tolerance,
                              bool replaces_sign) {
  DetectionResult r;
  r.detected = true;
  r.D = previous_rerun - previous_energy;
  r.Ef = current_energy - r.D;
  r.Gf = r.Ef - previous_energy;
  r.G = current_energy - previous_energy;
  bool accept = r.G * r.Gf > 0.0;
  if (tolerance) {
    const bool close = std::abs(r.G - r.Gf) <= *tolerance * std::abs(r.G);
    accept = replaces_sign ? close : accept && close;
  }
  r.decision = accept ? Decision::ACCEPT : Decision::RESCHEDULE;
  return r;
}

// ---------------------------------------------------------------------------
// Circuit execution

CircuitExecutor::CircuitExecutor(const Hamiltonian& h, const Circuit& ansatz,
                                 const DriftTrace& trace, ShotBudget shots, std::uint64_t seed)
    : all_terms_(h.non_identity_terms()),
      ansatz_(ansatz),
      trace_(trace),
      shots_(shots),
      seed_(seed),
      abs_sum_(0.0) {
  for (const auto& t : all_terms_) abs_sum_ += std::abs(t.coefficient);
}

std::size_t CircuitExecutor::term_index(const PauliString& p) const {
  for (std::size_t i = 0; i < all_terms_.size(); ++i) {
    if (all_terms_[i].string == p) return i;
  }
  throw std::invalid_argument("term " + p.str() + " is not part of the Hamiltonian");
}

double CircuitExecutor::offset(std::int64_t job) const {
  if (trace_.offsets.empty()) return 0.0;
  return trace_.offsets.at(static_cast<std::size_t>(job));
}

std::int64_t CircuitExecutor::horizon() const {
  return trace_.offsets.empty() ? std::numeric_limits<std::int64_t>::max() : trace_.horizon();
}

double CircuitExecutor::subset_energy(std::span<const PauliTerm> terms,
                                      std::span<const double> params, std::int64_t job,
                                      std::uint64_t slot) {
  if (terms.empty()) return 0.0;
  const Statevector psi = simulate(ansatz_, params);
  const std::uint64_t job_seed = mix_seed(mix_seed(seed_, static_cast<std::uint64_t>(job)), slot);
  const bool drifted = !trace_.offsets.empty();
  const double jitter_std = drifted ? trace_.config.circuit_jitter_std : 0.0;
  double energy = 0.0;
  for (const auto& t : terms) {
    const std::size_t idx = term_index(t.string);
    const std::uint64_t term_seed = mix_seed(job_seed, idx);
    double contribution = t.coefficient * observable_expectation(psi, t.string, shots_, term_seed);
    if (drifted && abs_sum_ > 0.0) {
      // Each circuit carries its |coefficient| share of the job's shift, so a
      // full-Hamiltonian estimate moves by exactly offset * energy_scale.
      const double share = trace_.config.energy_scale * std::abs(t.coefficient) / abs_sum_;
      contribution = apply_drift(contribution, trace_, job, share);
      if (jitter_std > 0.0) {
        std::mt19937_64 rng(mix_seed(term_seed, 0x6a09e667f3bcc908ull));
        contribution += std::normal_distribution<double>(0.0, jitter_std * share)(rng);
      }
    }
    energy += contribution;
    ++circuits_;
  }
  return energy;
}

// ---------------------------------------------------------------------------
// Controller

namespace {

SubsetPartition controller_partition(const ExperimentSetup& setup) {
  const auto& cc = setup.controller;
  if (cc.kind == ControllerKind::DISQ) return partition_prime_minor(setup.hamiltonian, cc.th_p);
  SubsetPartition p;
  p.prime = setup.hamiltonian.non_identity_terms();
  if (p.prime.empty()) throw StructureError("degenerate Hamiltonian: only identity terms");
  p.identity_offset = setup.hamiltonian.identity_offset();
  p.threshold = 1.0;
  return p;
}

std::size_t window_capacity(const ControllerConfig& cc) {
  switch (cc.kind) {
    case ControllerKind::BASELINE: return 0;
    case ControllerKind::QISMET: return 1;
    case ControllerKind::DISQ: return cc.K;
  }
  return 0;
}

std::vector<double> window_weights(const ControllerConfig& cc) {
  return cc.kind == ControllerKind::DISQ ? cc.weights : std::vector<double>{};
}

// Slots: 0/1 current pair, 2+2n / 3+2n reference n.
constexpr std::uint64_t kSlotPlus = 0;
constexpr std::uint64_t kSlotMinus = 1;
constexpr std::uint64_t reference_slot(std::size_t n, bool minus) { return 2 + 2 * n + (minus ? 1 : 0); }

}  // namespace

std::vector<double> initial_parameters(const ExperimentSetup& setup) {
  const Circuit c = build_ansatz(setup.ansatz);
  if (!setup.initial_theta.empty()) {
    if (setup.initial_theta.size() != c.parameter_count()) {
      throw std::invalid_argument("initial_theta has " + std::to_string(setup.initial_theta.size()) +
                                  " entries, ansatz has " + std::to_string(c.parameter_count()) +
                                  " parameters");
    }
    return setup.initial_theta;
  }
  std::mt19937_64 rng(mix_seed(setup.spsa.seed, 0x51ed));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<double> theta(c.parameter_count());
  for (auto& v : theta) v = angle(rng);
  return theta;
}

VqaController::VqaController(const ExperimentSetup& setup)
    : setup_(setup),
      circuit_(build_ansatz(setup.ansatz)),
      partition_(controller_partition(setup)),
      executor_(setup.hamiltonian, circuit_, setup.trace, setup.shots, setup.seed),
      window_(window_capacity(setup.controller), window_weights(setup.controller)),
      optimizer_(setup.spsa, initial_parameters(setup)),
      max_jobs_(setup.max_jobs > 0 ? setup.max_jobs : 10 * setup.iterations + 100) {
  setup.controller.validate();
  if (setup.ansatz.qubit_count != setup.hamiltonian.qubit_count()) {
    throw StructureError("ansatz acts on " + std::to_string(setup.ansatz.qubit_count) +
                         " qubits, Hamiltonian on " + std::to_string(setup.hamiltonian.qubit_count()));
  }
}

bool VqaController::can_run_job() const { return job_ < max_jobs_ && job_ < executor_.horizon(); }

Stage1Result VqaController::run_stage1() {
  const PerturbationPair& pair = optimizer_.ask();
  Stage1Result s1;
  const auto before = executor_.circuits_executed();
  s1.prime_plus = executor_.subset_energy(partition_.prime, pair.plus, job_, kSlotPlus);
  s1.prime_minus = executor_.subset_energy(partition_.prime, pair.minus, job_, kSlotMinus);
  s1.prime_energy = 0.5 * (s1.prime_plus + s1.prime_minus);
  for (std::size_t n = 0; n < window_.size(); ++n) {
    const auto& ref = window_[n].params;
    const double plus = executor_.subset_energy(partition_.prime, ref.plus, job_, reference_slot(n, false));
    const double minus = executor_.subset_energy(partition_.prime, ref.minus, job_, reference_slot(n, true));
    s1.reference_energies.push_back(0.5 * (plus + minus));
  }
  s1.circuits = executor_.circuits_executed() - before;
  return s1;
}

DetectionResult VqaController::detect(const Stage1Result& s1) const {
  switch (setup_.controller.kind) {
    case ControllerKind::BASELINE: {
      DetectionResult r;
      r.Ef = s1.prime_energy;
      return r;
    }
    case ControllerKind::QISMET:
      if (window_.empty()) return detect_drift(window_, s1.prime_energy, s1.reference_energies);
      return qismet_detect(window_[0].recorded_prime_energy, s1.prime_energy,
                           s1.reference_energies.at(0), setup_.controller.qismet_tolerance,
                           setup_.controller.qismet_tolerance_replaces_sign);
    case ControllerKind::DISQ:
      return detect_drift(window_, s1.prime_energy, s1.reference_energies);
  }
  return {};
}

Stage2Result VqaController::run_stage2(const DetectionResult& detection) {
  if (detection.decision != Decision::ACCEPT) {
    throw ProtocolError("stage S2 requested for a rescheduled job");
  }
  const PerturbationPair& pair = optimizer_.ask();
  Stage2Result s2;
  const auto before = executor_.circuits_executed();
  // Distinct slots from S1 so the minor samples are independent of the prime ones.
  s2.minor_plus = executor_.subset_energy(partition_.minor, pair.plus, job_, 0x5200 + kSlotPlus);
  s2.minor_minus = executor_.subset_energy(partition_.minor, pair.minus, job_, 0x5200 + kSlotMinus);
  s2.minor_energy = 0.5 * (s2.minor_plus + s2.minor_minus);
  s2.circuits = executor_.circuits_executed() - before;
  return s2;
}

JobEntry VqaController::step() {
  if (!can_run_job()) throw ProtocolError("job budget exhausted");
  JobEntry entry;
  entry.job = job_;
  entry.iteration = iteration_;
  entry.offset = executor_.offset(job_);
  entry.stage1 = run_stage1();
  entry.s1_circuits = entry.stage1.circuits;
  entry.recorded_energies = window_.recorded_energies();
  entry.weights = window_.active_weights();
  entry.detection = detect(entry.stage1);

  if (entry.detection.decision == Decision::ACCEPT) {
    Stage2Result s2 = run_stage2(entry.detection);
    s2.total_plus = entry.stage1.prime_plus + s2.minor_plus + partition_.identity_offset;
    s2.total_minus = entry.stage1.prime_minus + s2.minor_minus + partition_.identity_offset;
    entry.s2_circuits = s2.circuits;
    entry.accepted_energy = 0.5 * (s2.total_plus + s2.total_minus);
    ReferenceRecord rec{iteration_, optimizer_.ask(), entry.stage1.prime_energy};
    optimizer_.tell(s2.total_plus, s2.total_minus);
    window_.push(std::move(rec));
    entry.stage2 = s2;
    ++iteration_;
    reschedule_streak_ = 0;
  } else {
    ++reschedule_streak_;
    if (reschedule_streak_ >= setup_.controller.sigma) {
      window_.refresh(entry.stage1.reference_energies);
      entry.refreshed = true;
      reschedule_streak_ = 0;
    }
  }
  ++job_;
  return entry;
}

RunRecord run_experiment(const ExperimentSetup& setup) {
  if (setup.iterations < 0) throw std::invalid_argument("iteration budget must be >= 0");
  RunRecord record;
  record.controller = setup.controller;
  record.seed = setup.seed;
  for (const auto& t : setup.hamiltonian.terms()) {
    record.hamiltonian_text += fmt::format("{} {:.17g}\n", t.string.str(), t.coefficient);
  }
  record.ansatz = setup.ansatz;
  record.shots = setup.shots.is_exact() ? 0 : setup.shots.count();
  record.trace_fingerprint = setup.trace.fingerprint();
  record.ground_energy = setup.ground_energy;
  record.iteration_budget = setup.iterations;

  VqaController ctl(setup);
  record.prime_count = ctl.partition().prime.size();
  record.minor_count = ctl.partition().minor.size();

  auto& sum = record.summary;
  while (ctl.iteration() < setup.iterations) {
    if (!ctl.can_run_job()) {
      sum.truncated = true;
      break;
    }
    JobEntry e = ctl.step();
    sum.total_s1 += e.s1_circuits;
    sum.total_s2 += e.s2_circuits;
    if (e.accepted_energy) {
      if (!sum.first_accepted_energy) sum.first_accepted_energy = e.accepted_energy;
      sum.final_energy = e.accepted_energy;
    } else {
      ++sum.skip_count;
    }
    if (e.refreshed) ++sum.refresh_count;
    record.jobs.push_back(std::move(e));
  }
  sum.jobs = static_cast<std::int64_t>(record.jobs.size());
  sum.accepted_iterations = ctl.iteration();
  sum.total_circuits = sum.total_s1 + sum.total_s2;
  record.final_theta = ctl.optimizer().theta();
  if (sum.accepted_iterations > 0) {
    const Circuit c = build_ansatz(setup.ansatz);
    const auto terms = setup.hamiltonian.non_identity_terms();
    sum.final_exact_energy = hamiltonian_energy(c, record.final_theta, terms, ShotBudget::exact(), 0,
                                                setup.hamiltonian.identity_offset());
  }
  return record;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

json controller_config_to_json(const ControllerConfig& cfg) {
  json j = {{"kind", controller_kind_name(cfg.kind)},
            {"K", cfg.K},
            {"th_p", cfg.th_p},
            {"sigma", cfg.sigma},
            {"weights", cfg.weights},
            {"qismet_tolerance", optional_number(cfg.qismet_tolerance)},
            {"qismet_tolerance_mode", cfg.qismet_tolerance_replaces_sign ? "replace" : "gate"},
            {"name", cfg.label()}};
  return j;
}

ControllerConfig controller_config_from_json(const json& j) {
  ControllerConfig cfg;
  cfg.kind = parse_controller_kind(j.at("kind").get<std::string>());
  if (cfg.kind == ControllerKind::QISMET) cfg.K = 1;
  cfg.K = j.value("K", cfg.K);
  cfg.th_p = j.value("th_p", cfg.th_p);
  cfg.sigma = j.value("sigma", cfg.sigma);
  cfg.weights = j.value("weights", std::vector<double>{});
  cfg.qismet_tolerance = number_or_null(j, "qismet_tolerance");
  const auto mode = j.value("qismet_tolerance_mode", std::string("gate"));
  if (mode != "gate" && mode != "replace") {
    throw std::invalid_argument("controller.qismet_tolerance_mode must be \"gate\" or \"replace\"");
  }
  cfg.qismet_tolerance_replaces_sign = mode == "replace";
  cfg.name = j.value("name", std::string{});
  cfg.validate();
  return cfg;
}

json run_record_to_json(const RunRecord& r) {
  json jobs = json::array();
  for (const auto& e : r.jobs) {
    json d = {{"detected", e.detection.detected},
              {"D", e.detection.D},
              {"Ef", e.detection.Ef},
              {"Gf", e.detection.Gf},
              {"G", e.detection.G}};
    json entry = {{"job", e.job},
                  {"iteration", e.iteration},
                  {"prime_plus", e.stage1.prime_plus},
                  {"prime_minus", e.stage1.prime_minus},
                  {"prime_energy", e.stage1.prime_energy},
                  {"reference_energies", e.stage1.reference_energies},
                  {"recorded_energies", e.recorded_energies},
                  {"weights", e.weights},
                  {"detection", d},
                  {"decision", decision_name(e.detection.decision)},
                  {"s1_circuits", e.s1_circuits},
                  {"s2_circuits", e.s2_circuits},
                  {"offset", e.offset},
                  {"accepted_energy", optional_number(e.accepted_energy)},
                  {"refreshed", e.refreshed}};
    if (e.stage2) {
      entry["minor_energy"] = e.stage2->minor_energy;
      entry["total_plus"] = e.stage2->total_plus;
      entry["total_minus"] = e.stage2->total_minus;
    }
    jobs.push_back(std::move(entry));
  }
  const auto& s = r.summary;
  json summary = {{"first_accepted_energy", optional_number(s.first_accepted_energy)},
                  {"final_energy", optional_number(s.final_energy)},
                  {"final_exact_energy", optional_number(s.final_exact_energy)},
                  {"accepted_iterations", s.accepted_iterations},
                  {"jobs", s.jobs},
                  {"skip_count", s.skip_count},
                  {"refresh_count", s.refresh_count},
                  {"total_s1", s.total_s1},
                  {"total_s2", s.total_s2},
                  {"total_circuits", s.total_circuits},
                  {"truncated", s.truncated}};
  return {{"format", "driftskip-run/1"},
          {"controller", controller_config_to_json(r.controller)},
          {"seed", r.seed},
          {"hamiltonian", r.hamiltonian_text},
          {"ansatz", {{"kind", ansatz_kind_name(r.ansatz.kind)},
                      {"qubits", r.ansatz.qubit_count},
                      {"reps", r.ansatz.reps}}},
          {"shots", r.shots},
          {"trace_fingerprint", fmt::format("{:016x}", r.trace_fingerprint)},
          {"ground_energy", optional_number(r.ground_energy)},
          {"prime_count", r.prime_count},
          {"minor_count", r.minor_count},
          {"iteration_budget", r.iteration_budget},
          {"final_theta", r.final_theta},
          {"summary", summary},
          {"jobs", jobs}};
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.controller = controller_config_from_json(j.at("controller"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.hamiltonian_text = j.at("hamiltonian").get<std::string>();
  const auto& a = j.at("ansatz");
  r.ansatz = {parse_ansatz_kind(a.at("kind").get<std::string>()), a.at("qubits").get<std::size_t>(),
              a.at("reps").get<std::size_t>()};
  r.shots = j.at("shots").get<std::uint64_t>();
  r.trace_fingerprint = std::stoull(j.at("trace_fingerprint").get<std::string>(), nullptr, 16);
  r.ground_energy = number_or_null(j, "ground_energy");
  r.prime_count = j.at("prime_count").get<std::size_t>();
  r.minor_count = j.at("minor_count").get<std::size_t>();
  r.iteration_budget = j.at("iteration_budget").get<std::int64_t>();
  r.final_theta = j.at("final_theta").get<std::vector<double>>();
  const auto& s = j.at("summary");
  r.summary.first_accepted_energy = number_or_null(s, "first_accepted_energy");
  r.summary.final_energy = number_or_null(s, "final_energy");
  r.summary.final_exact_energy = number_or_null(s, "final_exact_energy");
  r.summary.accepted_iterations = s.at("accepted_iterations").get<std::int64_t>();
  r.summary.jobs = s.at("jobs").get<std::int64_t>();
  r.summary.skip_count = s.at("skip_count").get<std::int64_t>();
  r.summary.refresh_count = s.at("refresh_count").get<std::int64_t>();
  r.summary.total_s1 = s.at("total_s1").get<std::int64_t>();
  r.summary.total_s2 = s.at("total_s2").get<std::int64_t>();
  r.summary.total_circuits = s.at("total_circuits").get<std::int64_t>();
  r.summary.truncated = s.at("truncated").get<bool>();
  for (const auto& e : j.at("jobs")) {
    JobEntry entry;
    entry.job = e.at("job").get<std::int64_t>();
    entry.iteration = e.at("iteration").get<std::int64_t>();
    entry.stage1.prime_plus = e.at("prime_plus").get<double>();
    entry.stage1.prime_minus = e.at("prime_minus").get<double>();
    entry.stage1.prime_energy = e.at("prime_energy").get<double>();
    entry.stage1.reference_energies = e.at("reference_energies").get<std::vector<double>>();
    entry.recorded_energies = e.at("recorded_energies").get<std::vector<double>>();
    entry.weights = e.at("weights").get<std::vector<double>>();
    const auto& d = e.at("detection");
    entry.detection.detected = d.at("detected").get<bool>();
    entry.detection.D = d.at("D").get<double>();
    entry.detection.Ef = d.at("Ef").get<double>();
    entry.detection.Gf = d.at("Gf").get<double>();
    entry.detection.G = d.at("G").get<double>();
    entry.detection.decision =
        e.at("decision").get<std::string>() == "ACCEPT" ? Decision::ACCEPT : Decision::RESCHEDULE;
    entry.s1_circuits = e.at("s1_circuits").get<std::int64_t>();
    entry.stage1.circuits = entry.s1_circuits;
    entry.s2_circuits = e.at("s2_circuits").get<std::int64_t>();
    entry.offset = e.at("offset").get<double>();
    entry.accepted_energy = number_or_null(e, "accepted_energy");
    entry.refreshed = e.at("refreshed").get<bool>();
    if (e.contains("minor_energy")) {
      Stage2Result s2;
      s2.minor_energy = e.at("minor_energy").get<double>();
      s2.total_plus = e.at("total_plus").get<double>();
      s2.total_minus = e.at("total_minus").get<double>();
      s2.circuits = entry.s2_circuits;
      entry.stage2 = s2;
    }
    r.jobs.push_back(std::move(entry));
  }
  return r;
}

std::string run_record_csv(const RunRecord& r) {
  std::string out = kCsvHeader;
  out += '\n';
  const std::string label = r.controller.label();
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  for (const auto& e : r.jobs) {
    const auto& d = e.detection;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", e.job, e.iteration, label,
                       e.accepted_energy ? num(*e.accepted_energy) : std::string{},
                       d.detected ? num(d.D) : std::string{}, d.detected ? num(d.Ef) : std::string{},
                       d.detected ? num(d.Gf) : std::string{}, d.detected ? num(d.G) : std::string{},
                       decision_name(d.decision), e.s1_circuits, e.s2_circuits, num(e.offset));
  }
  return out;
}

}  // namespace driftskip
