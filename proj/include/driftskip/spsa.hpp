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
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace driftskip {

struct SpsaConfig {
  double a0 = 0.2;
  double alpha = 0.602;
  double c0 = 0.1;
  double gamma = 0.101;
  std::int64_t max_iterations = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PerturbationPair {
  std::vector<double> plus;
  std::vector<double> minus;

  friend bool operator==(const PerturbationPair&, const PerturbationPair&) = default;
};

/// First-order SPSA driven through ask/tell. The caller owns evaluation, so
/// an ask may be reissued any number of times before its tell.
class SpsaOptimizer {
 public:
  SpsaOptimizer(SpsaConfig cfg, std::vector<double> theta0);

  /// Returns theta +/- c_k * delta. Repeated calls before tell() return the
  /// same pair.
  const PerturbationPair& ask();

  /// Applies theta -= a_k * (e_plus - e_minus) / (2 c_k delta) and advances k.
  void tell(double e_plus, double e_minus);

  bool ask_outstanding() const { return pending_.has_value(); }
  std::int64_t iteration() const { return k_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& history() const { return history_; }
  const SpsaConfig& config() const { return cfg_; }

  double learning_rate(std::int64_t k) const;
  double perturbation_size(std::int64_t k) const;

  friend bool operator==(const SpsaOptimizer& a, const SpsaOptimizer& b);

 private:
  struct Pending {
    std::vector<double> delta;
    PerturbationPair pair;
  };

  SpsaConfig cfg_;
  std::vector<double> theta_;
  std::int64_t k_ = 0;
  std::optional<Pending> pending_;
  std::vector<double> history_;
  std::mt19937_64 rng_;
};

}  // namespace driftskip
