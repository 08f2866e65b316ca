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

#include <gtest/gtest.h>

namespace driftskip {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kData = DRIFTSKIP_DATA_DIR;

json toy_json() {
  return {{"hamiltonian", "hamiltonians/toy_2q.txt"},
          {"ansatz", {{"kind", "RA"}, {"reps", 2}}},
          {"controller", {{"kind", "BASELINE"}}},
          {"iterations", 30},
          {"exact", true},
          {"seed", 5}};
}

std::string config_error(const json& j) {
  try {
    parse_experiment_config(j, kData);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, ParsesToyConfig) {
  const auto cfg = parse_experiment_config(toy_json(), kData);
  ASSERT_EQ(cfg.hamiltonians.size(), 1u);
  EXPECT_EQ(cfg.hamiltonians[0], kData / "hamiltonians/toy_2q.txt");
  EXPECT_EQ(cfg.shots, 0u);
  EXPECT_EQ(cfg.iterations, 30);
  EXPECT_EQ(cfg.optimizer.seed, 5u);
  ASSERT_EQ(cfg.controllers.size(), 1u);
  EXPECT_EQ(cfg.controllers[0].kind, ControllerKind::BASELINE);
  EXPECT_EQ(cfg.output, kData / "out");
}

TEST(Config, DefaultsToSampling) {
  auto j = toy_json();
  j.erase("exact");
  EXPECT_EQ(parse_experiment_config(j, kData).shots, 8192u);
}

TEST(Config, ErrorsCarryFieldPaths) {
  auto j = toy_json();
  j["hamiltonian"] = "hamiltonians/nope.txt";
  const auto missing = config_error(j);
  EXPECT_NE(missing.find("$.hamiltonian"), std::string::npos);
  EXPECT_NE(missing.find("nope.txt"), std::string::npos);

  j = toy_json();
  j["iterations"] = 0;
  EXPECT_NE(config_error(j).find("$.iterations"), std::string::npos);

  j = toy_json();
  j["controllers"] = json::array({{{"kind", "DISQ"}}, {{"kind", "NOPE"}}});
  EXPECT_NE(config_error(j).find("$.controllers[1]"), std::string::npos);

  j = toy_json();
  j["ansatz"]["kind"] = "XYZ";
  EXPECT_NE(config_error(j).find("$.ansatz.kind"), std::string::npos);

  j = toy_json();
  j["sweep"] = {{"axis", "th_p"}, {"values", {0.5, 1.5}}};
  EXPECT_NE(config_error(j).find("$.sweep.values[1]"), std::string::npos);

  j = toy_json();
  j["noise"] = {{"episodes", {{"STEP", {{"rate", 2.0}}}}}};
  EXPECT_NE(config_error(j).find("$.noise"), std::string::npos);
}

TEST(Config, SeedOverrideReachesNoiseAndOptimizer) {
  auto j = toy_json();
  j["noise"] = {{"baseline_std", 0.01}};
  auto cfg = parse_experiment_config(j, kData);
  EXPECT_EQ(cfg.noise->seed, 5u);
  cfg.override_seed(42);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.optimizer.seed, 42u);
  EXPECT_EQ(cfg.noise->seed, 42u);
}

TEST(Setup, NoiseDefaultsFollowTheRun) {
  auto j = toy_json();
  j["noise"] = {{"baseline_std", 0.01}};
  j["max_jobs"] = 123;
  const auto cfg = parse_experiment_config(j, kData);
  const auto s = make_setup(cfg, cfg.controllers[0], cfg.hamiltonians[0]);
  ASSERT_TRUE(s.ground_energy);
  EXPECT_EQ(s.trace.horizon(), 123);
  EXPECT_DOUBLE_EQ(s.trace.config.energy_scale, std::abs(*s.ground_energy));
  EXPECT_EQ(s.ansatz.qubit_count, 2u);
}

RunRecord fake_record(const std::string& name, double first, double final_energy, double ground) {
  RunRecord r;
  r.controller.name = name;
  r.ground_energy = ground;
  r.summary.first_accepted_energy = first;
  r.summary.final_energy = final_energy;
  return r;
}

TEST(Compare, ProgressQuality) {
  EXPECT_DOUBLE_EQ(*progress_quality(fake_record("a", 0.0, -0.5, -1.0)), 0.5);
  EXPECT_DOUBLE_EQ(*progress_quality(fake_record("a", 0.0, -1.0, -1.0)), 1.0);
  EXPECT_FALSE(progress_quality(RunRecord{}));
}

TEST(Compare, FactorsAndRefusal) {
  const auto a = fake_record("a", 0.0, -0.8, -1.0);
  const auto b = fake_record("b", 0.0, -0.4, -1.0);
  const auto report = compare_records({a, b});
  EXPECT_DOUBLE_EQ(report["improvement_factors"][0]["factor"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(report["improvement_factors"][1]["factor"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(report["runs"][0]["final_error"].get<double>(), 0.2);

  auto other = b;
  other.trace_fingerprint = 1;
  EXPECT_THROW(compare_records({a, other}), MismatchError);
  other = b;
  other.seed = 9;
  EXPECT_THROW(compare_records({a, other}), MismatchError);
  other = b;
  other.hamiltonian_text = "ZZ 1\n";
  EXPECT_THROW(compare_records({a, other}), MismatchError);
  EXPECT_THROW(compare_records({a}), MismatchError);
}

TEST(Sweep, ReportRowsCarryAccounting) {
  auto r = fake_record("d", 0.0, -0.5, -1.0);
  r.controller.kind = ControllerKind::DISQ;
  r.controller.K = 3;
  r.prime_count = 2;
  r.minor_count = 5;
  const auto rep = sweep_report(SweepAxis::K, {{"3", r}});
  EXPECT_EQ(rep["rows"][0]["s1_per_job"].get<int>(), 16);
  EXPECT_EQ(rep["rows"][0]["s2_per_accept"].get<int>(), 10);
  const auto csv = sweep_csv(SweepAxis::K, {{"3", r}});
  EXPECT_EQ(csv.substr(0, 2), "K,");
}

}  // namespace
}  // namespace driftskip
