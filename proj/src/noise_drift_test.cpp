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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace driftskip {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "driftskip_noise_test";
  fs::create_directories(dir);
  return dir / name;
}

NoiseConfig busy_config(std::uint64_t seed) {
  NoiseConfig cfg;
  cfg.horizon_jobs = 400;
  cfg.seed = seed;
  cfg.baseline_std = 0.01;
  cfg.random_sign = true;
  cfg.profiles[static_cast<std::size_t>(DriftShape::STEP)] = {0.02, 0.05, 0.2, 5, 30};
  cfg.profiles[static_cast<std::size_t>(DriftShape::SPIKE)] = {0.02, 0.1, 0.3, 1, 3};
  cfg.profiles[static_cast<std::size_t>(DriftShape::RAMP)] = {0.01, 0.05, 0.2, 10, 40};
  cfg.profiles[static_cast<std::size_t>(DriftShape::RANDOM_WALK)] = {0.01, 0.05, 0.1, 10, 50};
  return cfg;
}

TEST(GenerateTrace, ZeroConfigIsAllZero) {
  NoiseConfig cfg;
  cfg.horizon_jobs = 50;
  const auto t = generate_trace(cfg);
  ASSERT_EQ(t.offsets.size(), 50u);
  for (double v : t.offsets) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(t.episodes.empty());
}

TEST(GenerateTrace, ScriptedStep) {
  NoiseConfig cfg;
  cfg.horizon_jobs = 30;
  cfg.scripted.push_back({10, 5, 0.1, DriftShape::STEP});
  const auto t = generate_trace(cfg);
  EXPECT_EQ(t.offsets[9], 0.0);
  for (int j = 10; j < 15; ++j) EXPECT_EQ(t.offsets[j], 0.1);
  EXPECT_EQ(t.offsets[15], 0.0);
  EXPECT_FALSE(t.episode_active(9));
  EXPECT_TRUE(t.episode_active(14));
  EXPECT_FALSE(t.episode_active(15));
}

TEST(GenerateTrace, ShapesFollowTheirProfiles) {
  const auto spike = episode_offsets({2, 4, 0.4, DriftShape::SPIKE}, 10, 0);
  EXPECT_DOUBLE_EQ(spike[2], 0.4);
  EXPECT_DOUBLE_EQ(spike[3], 0.3);
  EXPECT_DOUBLE_EQ(spike[5], 0.1);
  EXPECT_EQ(spike[6], 0.0);
  const auto ramp = episode_offsets({0, 4, 0.4, DriftShape::RAMP}, 10, 0);
  EXPECT_DOUBLE_EQ(ramp[0], 0.1);
  EXPECT_DOUBLE_EQ(ramp[3], 0.4);
  EXPECT_EQ(ramp[4], 0.0);
  // Episodes hanging off either end are clipped to the horizon.
  const auto clipped = episode_offsets({8, 5, 1.0, DriftShape::STEP}, 10, 0);
  EXPECT_EQ(clipped.size(), 10u);
  EXPECT_EQ(clipped[9], 1.0);
}

TEST(GenerateTrace, Deterministic) {
  const auto a = generate_trace(busy_config(17));
  const auto b = generate_trace(busy_config(17));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), generate_trace(busy_config(18)).fingerprint());
  EXPECT_FALSE(a.episodes.empty());
}

TEST(GenerateTrace, ValidationNamesField) {
  auto cfg = busy_config(1);
  cfg.profiles[0].magnitude_min = 1.0;
  cfg.profiles[0].magnitude_max = 0.5;
  try {
    generate_trace(cfg);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("episodes.STEP.magnitude"), std::string::npos);
  }
  NoiseConfig zero;
  zero.horizon_jobs = 0;
  EXPECT_THROW(generate_trace(zero), std::invalid_argument);
}

TEST(ApplyDrift, Arithmetic) {
  NoiseConfig cfg;
  cfg.horizon_jobs = 2;
  cfg.scripted.push_back({1, 1, 0.11, DriftShape::STEP});
  const auto t = generate_trace(cfg);
  EXPECT_DOUBLE_EQ(apply_drift(-0.62, t, 0, 1.0), -0.62);
  EXPECT_NEAR(apply_drift(-0.62, t, 1, 2.0), -0.40, 1e-15);
  EXPECT_THROW(apply_drift(0.0, t, 2, 1.0), std::out_of_range);
  EXPECT_THROW(apply_drift(0.0, t, -1, 1.0), std::out_of_range);
}

TEST(ApplyDrift, BatchSpreadCalibration) {
  // A wandering 100-job trace rescaled to a 0.22 spread, applied to an ideal
  // batch mean of -0.62.
  NoiseConfig cfg;
  cfg.horizon_jobs = 100;
  cfg.seed = 2;
  cfg.baseline_std = 0.02;
  cfg.random_sign = true;
  cfg.profiles[static_cast<std::size_t>(DriftShape::RANDOM_WALK)] = {0.05, 0.05, 0.15, 10, 40};
  cfg.target_range = 0.22;
  const auto t = generate_trace(cfg);
  std::vector<double> batch;
  for (std::int64_t j = 0; j < 100; ++j) batch.push_back(apply_drift(-0.62, t, j, 1.0));
  const auto [lo, hi] = std::minmax_element(batch.begin(), batch.end());
  EXPECT_NEAR(*hi - *lo, 0.22, 1e-12);
  const double mean = std::accumulate(batch.begin(), batch.end(), 0.0) / 100.0;
  EXPECT_LT(std::abs(mean + 0.62), 0.11);
  EXPECT_GT(*hi, -0.62);
  EXPECT_LT(*lo, -0.62);
}

TEST(SaveLoad, RoundTrip) {
  const auto t = generate_trace(busy_config(5));
  const auto path = scratch("round.json").string();
  save_trace(t, path);
  const auto back = load_trace(path);
  EXPECT_EQ(back, t);
  EXPECT_EQ(generate_trace(back.config).offsets, t.offsets);
}

TEST(SaveLoad, TruncatedFileIsFormatError) {
  const auto t = generate_trace(busy_config(5));
  const auto path = scratch("full.json").string();
  save_trace(t, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  const auto cut = scratch("cut.json").string();
  std::ofstream(cut) << text.substr(0, text.size() / 2);
  EXPECT_THROW(load_trace(cut), TraceFormatError);
}

TEST(SaveLoad, InconsistentFilesRejected) {
  auto j = trace_to_json(generate_trace(busy_config(5)));
  auto short_offsets = j;
  short_offsets["offsets"].erase(short_offsets["offsets"].begin());
  EXPECT_THROW(trace_from_json(short_offsets), TraceFormatError);
  auto bad_seed = j;
  bad_seed["seed"] = 999;
  EXPECT_THROW(trace_from_json(bad_seed), TraceFormatError);
  auto no_config = j;
  no_config.erase("config");
  EXPECT_THROW(trace_from_json(no_config), TraceFormatError);
  EXPECT_THROW(load_trace(scratch("missing.json").string()), std::runtime_error);
}

}  // namespace
}  // namespace driftskip
