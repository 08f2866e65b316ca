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

#include <cmath>
#include <string>

namespace driftskip {

void SpsaConfig::validate() const {
  if (!(a0 > 0.0)) throw std::invalid_argument("optimizer.a0 must be > 0");
  if (!(c0 > 0.0)) throw std::invalid_argument("optimizer.c0 must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("optimizer.alpha must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("optimizer.gamma must lie in (0, 1]");
  if (max_iterations < 1) throw std::invalid_argument("optimizer.max_iterations must be positive");
}

SpsaOptimizer::SpsaOptimizer(SpsaConfig cfg, std::vector<double> theta0)
    : cfg_(cfg), theta_(std::move(theta0)), rng_(cfg.seed) {
  cfg_.validate();
}

double SpsaOptimizer::learning_rate(std::int64_t k) const {
  return cfg_.a0 / std::pow(static_cast<double>(k + 1), cfg_.alpha);
}

double SpsaOptimizer::perturbation_size(std::int64_t k) const {
  return cfg_.c0 / std::pow(static_cast<double>(k + 1), cfg_.gamma);
}

const PerturbationPair& SpsaOptimizer::ask() {
  if (!pending_) {
    Pending p;
    p.delta.resize(theta_.size());
    for (auto& d : p.delta) d = (rng_() >> 63) ? 1.0 : -1.0;
    const double ck = perturbation_size(k_);
    p.pair.plus = theta_;
    p.pair.minus = theta_;
    for (std::size_t i = 0; i < theta_.size(); ++i) {
      p.pair.plus[i] += ck * p.delta[i];
      p.pair.minus[i] -= ck * p.delta[i];
    }
    pending_ = std::move(p);
  }
  return pending_->pair;
}

void SpsaOptimizer::tell(double e_plus, double e_minus) {
  if (!pending_) throw ProtocolError("tell() without an outstanding ask()");
  const double ck = perturbation_size(k_);
  const double ak = learning_rate(k_);
  const double diff = e_plus - e_minus;
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    theta_[i] -= ak * diff / (2.0 * ck * pending_->delta[i]);
  }
  history_.push_back(0.5 * (e_plus + e_minus));
  ++k_;
  pending_.reset();
}

bool operator==(const SpsaOptimizer& a, const SpsaOptimizer& b) {
  const bool pending_equal = a.pending_.has_value() == b.pending_.has_value() &&
                             (!a.pending_ || (a.pending_->delta == b.pending_->delta &&
                                              a.pending_->pair == b.pending_->pair));
  return a.theta_ == b.theta_ && a.k_ == b.k_ && pending_equal && a.history_ == b.history_ &&
         a.rng_ == b.rng_;
}

}  // namespace driftskip
