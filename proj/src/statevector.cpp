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

#include "driftskip/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace driftskip {

namespace {

using cd = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubit(std::uint32_t q, std::size_t n) {
  if (q >= n) {
    throw std::out_of_range("qubit index " + std::to_string(q) + " outside " +
                            std::to_string(n) + "-qubit register");
  }
}

}  // namespace

bool is_two_qubit(GateKind kind) { return kind == GateKind::CX || kind == GateKind::CZ; }

bool is_parameterized(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

Circuit::Circuit(std::size_t qubit_count) : qubit_count_(qubit_count) {
  if (qubit_count == 0) throw std::invalid_argument("circuit needs at least one qubit");
  if (qubit_count > 62) throw CapacityError("circuit wider than 62 qubits");
}

Circuit& Circuit::push(Gate g) {
  check_qubit(g.target0, qubit_count_);
  if (is_two_qubit(g.kind)) {
    check_qubit(g.target1, qubit_count_);
    if (g.target0 == g.target1) throw std::invalid_argument("two-qubit gate needs distinct targets");
  }
  gates_.push_back(g);
  return *this;
}

Circuit& Circuit::h(std::uint32_t q) { return push({GateKind::H, q}); }
Circuit& Circuit::s(std::uint32_t q) { return push({GateKind::S, q}); }
Circuit& Circuit::sdg(std::uint32_t q) { return push({GateKind::Sdg, q}); }
Circuit& Circuit::x(std::uint32_t q) { return push({GateKind::X, q}); }
Circuit& Circuit::cx(std::uint32_t control, std::uint32_t target) {
  return push({GateKind::CX, control, target});
}
Circuit& Circuit::cz(std::uint32_t a, std::uint32_t b) { return push({GateKind::CZ, a, b}); }

Circuit& Circuit::rotation(GateKind kind, std::uint32_t q, double angle) {
  if (!is_parameterized(kind)) throw std::invalid_argument("not a rotation gate");
  return push({kind, q, 0, std::nullopt, angle});
}

Circuit& Circuit::parameterized(GateKind kind, std::uint32_t q) {
  if (!is_parameterized(kind)) throw std::invalid_argument("not a rotation gate");
  push({kind, q, 0, parameter_count_, 0.0});
  ++parameter_count_;
  return *this;
}

std::size_t Circuit::entangling_gate_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return is_two_qubit(g.kind); }));
}

std::string ansatz_kind_name(AnsatzKind kind) { return kind == AnsatzKind::RA ? "RA" : "SU2"; }

AnsatzKind parse_ansatz_kind(const std::string& name) {
  if (name == "RA" || name == "ra") return AnsatzKind::RA;
  if (name == "SU2" || name == "su2") return AnsatzKind::SU2;
  throw std::invalid_argument("unknown ansatz kind '" + name + "' (expected RA or SU2)");
}

Circuit build_ansatz(const AnsatzSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("ansatz needs at least one repetition");
  Circuit c(spec.qubit_count);
  const auto n = static_cast<std::uint32_t>(spec.qubit_count);
  auto rotation_layer = [&] {
    for (std::uint32_t q = 0; q < n; ++q) c.parameterized(GateKind::RY, q);
    if (spec.kind == AnsatzKind::SU2) {
      for (std::uint32_t q = 0; q < n; ++q) c.parameterized(GateKind::RZ, q);
    }
  };
  for (std::size_t r = 0; r < spec.reps; ++r) {
    rotation_layer();
    for (std::uint32_t q = 0; q + 1 < n; ++q) c.cx(q, q + 1);
  }
  rotation_layer();
  return c;
}

Statevector::Statevector(std::size_t qubit_count)
    : qubit_count_(qubit_count), amps_(std::size_t{1} << qubit_count, cd{0.0, 0.0}) {
  amps_[0] = 1.0;
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void Statevector::apply_1q(std::uint32_t q, const cd (&u)[2][2]) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      cd a0 = amps_[i];
      cd a1 = amps_[i + stride];
      amps_[i] = u[0][0] * a0 + u[0][1] * a1;
      amps_[i + stride] = u[1][0] * a0 + u[1][1] * a1;
    }
  }
}

void Statevector::apply(const Gate& g, double angle) {
  const cd i{0.0, 1.0};
  switch (g.kind) {
    case GateKind::H: {
      const cd u[2][2] = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::S: {
      const cd u[2][2] = {{1.0, 0.0}, {0.0, i}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::Sdg: {
      const cd u[2][2] = {{1.0, 0.0}, {0.0, -i}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::X: {
      const cd u[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::RX: {
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      const cd u[2][2] = {{c, -i * s}, {-i * s, c}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::RY: {
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      const cd u[2][2] = {{c, -s}, {s, c}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::RZ: {
      const cd u[2][2] = {{std::polar(1.0, -angle / 2), 0.0}, {0.0, std::polar(1.0, angle / 2)}};
      apply_1q(g.target0, u);
      return;
    }
    case GateKind::CX: {
      const std::size_t cbit = std::size_t{1} << g.target0;
      const std::size_t tbit = std::size_t{1} << g.target1;
      for (std::size_t x = 0; x < amps_.size(); ++x) {
        if ((x & cbit) && !(x & tbit)) std::swap(amps_[x], amps_[x | tbit]);
      }
      return;
    }
    case GateKind::CZ: {
      const std::size_t both = (std::size_t{1} << g.target0) | (std::size_t{1} << g.target1);
      for (std::size_t x = 0; x < amps_.size(); ++x) {
        if ((x & both) == both) amps_[x] = -amps_[x];
      }
      return;
    }
  }
}

Statevector simulate(const Circuit& circuit, std::span<const double> params) {
  if (params.size() != circuit.parameter_count()) {
    throw std::invalid_argument("circuit expects " + std::to_string(circuit.parameter_count()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  if (circuit.qubit_count() > kMaxDenseQubits) {
    throw CapacityError("statevector simulation limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits");
  }
  Statevector psi(circuit.qubit_count());
  for (const Gate& g : circuit.gates()) {
    psi.apply(g, g.param_slot ? params[*g.param_slot] : g.angle);
  }
  return psi;
}

double exact_expectation(const Statevector& psi, const PauliString& p) {
  if (p.size() != psi.qubit_count()) {
    throw std::invalid_argument("observable width does not match the register");
  }
  const std::uint64_t flip = p.flip_mask();
  std::uint64_t phase_mask = 0;
  int y_count = 0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q] == Pauli::Y || p[q] == Pauli::Z) phase_mask |= std::uint64_t{1} << q;
    if (p[q] == Pauli::Y) ++y_count;
  }
  static const cd kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto amps = psi.amplitudes();
  cd acc{0.0, 0.0};
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double sign = (std::popcount(x & phase_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps[x ^ flip]) * amps[x] * sign;
  }
  acc *= kIPow[y_count % 4];
  return std::clamp(acc.real(), -1.0, 1.0);
}

void apply_basis_rotation(Statevector& psi, const PauliString& p) {
  for (std::uint32_t q = 0; q < p.size(); ++q) {
    if (p[q] == Pauli::X) {
      psi.apply({GateKind::H, q}, 0.0);
    } else if (p[q] == Pauli::Y) {
      psi.apply({GateKind::Sdg, q}, 0.0);
      psi.apply({GateKind::H, q}, 0.0);
    }
  }
}

double z_parity_expectation(const Statevector& psi, std::uint64_t mask) {
  const auto amps = psi.amplitudes();
  double acc = 0.0;
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double prob = std::norm(amps[x]);
    acc += (std::popcount(x & mask) & 1) ? -prob : prob;
  }
  return acc;
}

Counts sample_counts(const Statevector& psi, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shot count must be positive");
  const auto amps = psi.amplitudes();
  const std::size_t n = psi.qubit_count();
  std::mt19937_64 rng(seed);
  Counts counts;
  // Multinomial draw as a chain of conditional binomials over basis states.
  double remaining_prob = 1.0;
  std::uint64_t remaining = shots;
  for (std::uint64_t x = 0; x < amps.size() && remaining > 0; ++x) {
    const double prob = std::norm(amps[x]);
    std::uint64_t k = 0;
    if (x + 1 == amps.size() || prob >= remaining_prob) {
      k = remaining;
    } else if (prob > 0.0) {
      std::binomial_distribution<std::uint64_t> draw(remaining, std::clamp(prob / remaining_prob, 0.0, 1.0));
      k = draw(rng);
    }
    remaining_prob -= prob;
    remaining -= k;
    if (k > 0) {
      std::string bits(n, '0');
      for (std::size_t q = 0; q < n; ++q) {
        if ((x >> q) & 1) bits[q] = '1';
      }
      counts[bits] = k;
    }
  }
  return counts;
}

ShotBudget ShotBudget::shots(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("shots must be positive (use EXACT for analytic mode)");
  return ShotBudget(n);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double observable_expectation(const Statevector& psi, const PauliString& p, ShotBudget shots,
                              std::uint64_t rng_seed) {
  if (shots.is_exact()) return exact_expectation(psi, p);
  if (p.size() != psi.qubit_count()) {
    throw std::invalid_argument("observable width does not match the register");
  }
  if (p.is_identity()) return 1.0;
  Statevector rotated = psi;
  apply_basis_rotation(rotated, p);
  return expectation_from_counts(sample_counts(rotated, shots.count(), rng_seed), p);
}

double observable_expectation(const Circuit& circuit, std::span<const double> params,
                              const PauliString& p, ShotBudget shots, std::uint64_t rng_seed) {
  return observable_expectation(simulate(circuit, params), p, shots, rng_seed);
}

double hamiltonian_energy(const Circuit& circuit, std::span<const double> params,
                          std::span<const PauliTerm> terms, ShotBudget shots,
                          std::uint64_t rng_seed, double identity_offset) {
  double energy = identity_offset;
  if (terms.empty()) return energy;
  const Statevector psi = simulate(circuit, params);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    energy += terms[i].coefficient *
              observable_expectation(psi, terms[i].string, shots, mix_seed(rng_seed, i));
  }
  return energy;
}

}  // namespace driftskip
