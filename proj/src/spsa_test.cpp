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

#include "driftskip/spsa.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace driftskip {
namespace {

double square(const std::vector<double>& v) { return v[0] * v[0]; }

TEST(Spsa, FirstAskPerturbsByC0) {
  SpsaOptimizer opt({}, {0.5, -1.0, 2.0});
  const auto pair = opt.ask();
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::abs(pair.plus[i] - opt.theta()[i]), 0.1, 1e-15);
    EXPECT_NEAR(pair.plus[i] - opt.theta()[i], opt.theta()[i] - pair.minus[i], 1e-15);
  }
  EXPECT_TRUE(opt.ask_outstanding());
}

TEST(Spsa, AskIsIdempotentUntilTell) {
  SpsaOptimizer opt({}, {0.1, 0.2});
  const auto first = opt.ask();
  EXPECT_EQ(opt.ask(), first);
  EXPECT_EQ(opt.iteration(), 0);
  opt.tell(1.0, 0.5);
  EXPECT_EQ(opt.iteration(), 1);
  EXPECT_FALSE(opt.ask_outstanding());
}

TEST(Spsa, SameSeedSameDirections) {
  SpsaConfig cfg;
  cfg.seed = 77;
  SpsaOptimizer a(cfg, {0, 0, 0, 0});
  SpsaOptimizer b(cfg, {0, 0, 0, 0});
  for (int k = 0; k < 20; ++k) {
    EXPECT_EQ(a.ask(), b.ask());
    a.tell(k * 0.1, -k * 0.05);
    b.tell(k * 0.1, -k * 0.05);
  }
  EXPECT_EQ(a, b);
}

TEST(Spsa, EqualEnergiesLeaveThetaUnchanged) {
  SpsaOptimizer opt({}, {0.3, -0.7});
  opt.ask();
  opt.tell(-1.25, -1.25);
  EXPECT_EQ(opt.theta(), (std::vector<double>{0.3, -0.7}));
  EXPECT_EQ(opt.history(), (std::vector<double>{-1.25}));
}

TEST(Spsa, TellWithoutAskIsProtocolError) {
  SpsaOptimizer opt({}, {0.0});
  EXPECT_THROW(opt.tell(0.0, 0.0), ProtocolError);
  opt.ask();
  opt.tell(0.0, 0.0);
  EXPECT_THROW(opt.tell(0.0, 0.0), ProtocolError);
}

TEST(Spsa, QuadraticConvergesLikeGradientDescent) {
  // In one dimension the simultaneous-perturbation estimate of d/dθ θ² is
  // exact, so SPSA must track plain gradient descent with the same gains.
  SpsaConfig cfg;
  SpsaOptimizer opt(cfg, {1.0});
  double gd = 1.0;
  int reached = -1;
  for (int k = 0; k < 200; ++k) {
    const auto pair = opt.ask();
    opt.tell(square(pair.plus), square(pair.minus));
    gd -= cfg.a0 / std::pow(k + 1.0, cfg.alpha) * 2.0 * gd;
    EXPECT_NEAR(opt.theta()[0], gd, 1e-12);
    if (reached < 0 && std::abs(opt.theta()[0]) < 0.1) reached = k;
  }
  EXPECT_GE(reached, 0);
  EXPECT_LT(std::abs(opt.theta()[0]), 0.1);
}

TEST(Spsa, ScheduleValues) {
  SpsaOptimizer opt({}, {0.0});
  EXPECT_DOUBLE_EQ(opt.learning_rate(0), 0.2);
  EXPECT_DOUBLE_EQ(opt.perturbation_size(0), 0.1);
  EXPECT_NEAR(opt.learning_rate(9), 0.2 / std::pow(10.0, 0.602), 1e-15);
  EXPECT_NEAR(opt.perturbation_size(9), 0.1 / std::pow(10.0, 0.101), 1e-15);
}

TEST(Spsa, InvalidConfig) {
  SpsaConfig cfg;
  cfg.a0 = 0.0;
  EXPECT_THROW(SpsaOptimizer(cfg, {0.0}), std::invalid_argument);
  cfg = {};
  cfg.alpha = 1.5;
  EXPECT_THROW(SpsaOptimizer(cfg, {0.0}), std::invalid_argument);
}

}  // namespace
}  // namespace driftskip
