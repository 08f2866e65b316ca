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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"

namespace driftskip {
namespace {

constexpr double kPi = std::numbers::pi;

Circuit bell() {
  Circuit c(2);
  c.h(0).cx(0, 1);
  return c;
}

// Builds the circuit's unitary as an explicit product of full-register
// matrices and applies it to |0...0>.
std::vector<oracle::cd> dense_run(const Circuit& c, const std::vector<double>& params) {
  const std::size_t n = c.qubit_count();
  oracle::Dense u = oracle::Dense::identity(std::size_t{1} << n);
  const oracle::cd i{0, 1};
  for (const Gate& g : c.gates()) {
    const double t = g.param_slot ? params[*g.param_slot] : g.angle;
    oracle::Dense m(2);
    oracle::Dense full;
    switch (g.kind) {
      case GateKind::H: m = oracle::hadamard(); break;
      case GateKind::S: m(0, 0) = 1; m(1, 1) = i; break;
      case GateKind::Sdg: m(0, 0) = 1; m(1, 1) = -i; break;
      case GateKind::X: m = oracle::single('X'); break;
      case GateKind::RX: m = oracle::rx(t); break;
      case GateKind::RY: m = oracle::ry(t); break;
      case GateKind::RZ: m = oracle::rz(t); break;
      case GateKind::CX: full = oracle::controlled_x(g.target0, g.target1, n); break;
      case GateKind::CZ: {
        const oracle::Dense h = oracle::embed_1q(oracle::hadamard(), g.target1, n);
        full = oracle::matmul(h, oracle::matmul(oracle::controlled_x(g.target0, g.target1, n), h));
        break;
      }
    }
    if (full.n == 0) full = oracle::embed_1q(m, g.target0, n);
    u = oracle::matmul(full, u);
  }
  std::vector<oracle::cd> psi(u.n);
  for (std::size_t r = 0; r < u.n; ++r) psi[r] = u(r, 0);
  return psi;
}

Circuit random_circuit(std::size_t n, std::size_t depth, std::mt19937_64& rng) {
  Circuit c(n);
  std::uniform_int_distribution<int> kind(0, 8);
  std::uniform_int_distribution<std::uint32_t> qubit(0, static_cast<std::uint32_t>(n - 1));
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (std::size_t d = 0; d < depth; ++d) {
    const auto q = qubit(rng);
    auto r = qubit(rng);
    if (r == q) r = (q + 1) % n;
    switch (kind(rng)) {
      case 0: c.h(q); break;
      case 1: c.s(q); break;
      case 2: c.sdg(q); break;
      case 3: c.x(q); break;
      case 4: c.parameterized(GateKind::RX, q); break;
      case 5: c.parameterized(GateKind::RY, q); break;
      case 6: c.rotation(GateKind::RZ, q, angle(rng)); break;
      case 7: c.cx(q, r); break;
      case 8: c.cz(q, r); break;
    }
  }
  return c;
}

std::vector<double> random_params(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<double> p(count);
  for (auto& v : p) v = angle(rng);
  return p;
}

TEST(Ansatz, ParameterCounts) {
  const auto ra = build_ansatz({AnsatzKind::RA, 4, 6});
  EXPECT_EQ(ra.parameter_count(), 28u);
  EXPECT_EQ(ra.entangling_gate_count(), 18u);

  const auto one = build_ansatz({AnsatzKind::RA, 1, 1});
  EXPECT_EQ(one.parameter_count(), 2u);
  EXPECT_EQ(one.gates().size(), 2u);
  EXPECT_EQ(one.entangling_gate_count(), 0u);

  EXPECT_EQ(build_ansatz({AnsatzKind::SU2, 2, 2}).parameter_count(), 12u);
  EXPECT_THROW(build_ansatz({AnsatzKind::RA, 2, 0}), std::invalid_argument);
}

TEST(Ansatz, SlotsAreContiguous) {
  const auto c = build_ansatz({AnsatzKind::SU2, 3, 2});
  std::vector<int> seen(c.parameter_count(), 0);
  for (const auto& g : c.gates()) {
    if (g.param_slot) ++seen.at(*g.param_slot);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Circuit, RejectsBadTargets) {
  Circuit c(2);
  EXPECT_THROW(c.h(2), std::out_of_range);
  EXPECT_THROW(c.cx(1, 1), std::invalid_argument);
  EXPECT_THROW(c.rotation(GateKind::H, 0, 1.0), std::invalid_argument);
}

TEST(Simulate, EmptyAndBitFlip) {
  const auto psi = simulate(Circuit(1), {});
  EXPECT_EQ(psi[0], std::complex<double>(1.0, 0.0));
  EXPECT_EQ(psi[1], std::complex<double>(0.0, 0.0));

  Circuit c(1);
  c.rotation(GateKind::RY, 0, kPi);
  const auto flipped = simulate(c, {});
  EXPECT_NEAR(std::abs(flipped[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(flipped[1]), 1.0, 1e-15);
}

TEST(Simulate, Errors) {
  const auto c = build_ansatz({AnsatzKind::RA, 2, 1});
  EXPECT_THROW(simulate(c, std::vector<double>(3)), std::invalid_argument);
  Circuit wide(13);
  EXPECT_THROW(simulate(wide, {}), CapacityError);
}

TEST(Simulate, MatchesDenseMatrixChain) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = random_circuit(3, 20, rng);
    const auto params = random_params(c.parameter_count(), rng);
    const auto psi = simulate(c, params);
    const auto want = dense_run(c, params);
    for (std::size_t x = 0; x < want.size(); ++x) {
      EXPECT_NEAR(std::abs(psi[x] - want[x]), 0.0, 1e-12) << "trial " << trial << " amp " << x;
    }
  }
}

TEST(Expectation, BellState) {
  const auto c = bell();
  EXPECT_DOUBLE_EQ(observable_expectation(Circuit(1), {}, PauliString::parse("Z"), ShotBudget::exact(), 0), 1.0);
  EXPECT_NEAR(observable_expectation(c, {}, PauliString::parse("ZZ"), ShotBudget::exact(), 0), 1.0, 1e-15);
  EXPECT_NEAR(observable_expectation(c, {}, PauliString::parse("ZI"), ShotBudget::exact(), 0), 0.0, 1e-15);
  EXPECT_NEAR(observable_expectation(c, {}, PauliString::parse("XX"), ShotBudget::exact(), 0), 1.0, 1e-15);
  EXPECT_NEAR(observable_expectation(c, {}, PauliString::parse("YY"), ShotBudget::exact(), 0), -1.0, 1e-15);
}

TEST(Expectation, MatchesDenseOperator) {
  std::mt19937_64 rng(11);
  const char* strings[] = {"XYZ", "YYI", "ZIX", "IYI", "XXX"};
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_circuit(3, 15, rng);
    const auto params = random_params(c.parameter_count(), rng);
    const auto psi = simulate(c, params);
    const auto dense = dense_run(c, params);
    for (const char* s : strings) {
      const double want = oracle::expectation(oracle::pauli_matrix(s), dense);
      EXPECT_NEAR(exact_expectation(psi, PauliString::parse(s)), want, 1e-12) << s;
    }
  }
}

TEST(Expectation, ToyHamiltonianTermByTerm) {
  const auto h = parse_hamiltonian("XX 1.4\nZI 0.05\nZX 0.02");
  Circuit c(2);
  c.parameterized(GateKind::RY, 0).cx(0, 1).parameterized(GateKind::RY, 1);
  const std::vector<double> params{kPi / 2, 0.3};
  const auto dense = dense_run(c, params);
  double want = 0.0;
  for (const auto& t : h.terms()) want += t.coefficient * oracle::expectation(oracle::pauli_matrix(t.string.str()), dense);
  EXPECT_NEAR(hamiltonian_energy(c, params, h.terms(), ShotBudget::exact(), 0), want, 1e-12);
  EXPECT_EQ(hamiltonian_energy(c, params, {}, ShotBudget::exact(), 0), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian_energy(c, params, {}, ShotBudget::exact(), 0, -2.5), -2.5);
}

TEST(Expectation, BasisRotationAgrees) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_circuit(2, 12, rng);
    const auto params = random_params(c.parameter_count(), rng);
    const auto psi = simulate(c, params);
    for (const char* s : {"XI", "YI", "ZI", "IX", "IY", "IZ"}) {
      const auto p = PauliString::parse(s);
      auto rotated = psi;
      apply_basis_rotation(rotated, p);
      EXPECT_NEAR(z_parity_expectation(rotated, p.support_mask()), exact_expectation(psi, p), 1e-12) << s;
    }
  }
}

TEST(Sampling, MillionShotsWithinFiveStandardErrors) {
  std::mt19937_64 rng(5);
  const auto c = random_circuit(3, 20, rng);
  const auto params = random_params(c.parameter_count(), rng);
  for (const char* s : {"ZZI", "XIY", "YXZ"}) {
    const auto p = PauliString::parse(s);
    const double exact = observable_expectation(c, params, p, ShotBudget::exact(), 0);
    const double est = observable_expectation(c, params, p, ShotBudget::shots(1'000'000), 99);
    const double se = std::sqrt(std::max(1.0 - exact * exact, 1e-12) / 1e6);
    EXPECT_LT(std::abs(est - exact), 5 * se) << s;
  }
}

TEST(Sampling, DeterministicCounts) {
  const auto psi = simulate(bell(), {});
  EXPECT_EQ(sample_counts(psi, 1000, 42), sample_counts(psi, 1000, 42));
  EXPECT_NE(sample_counts(psi, 1000, 42), sample_counts(psi, 1000, 43));
  const auto counts = sample_counts(psi, 1000, 42);
  std::uint64_t total = 0;
  for (const auto& [bits, k] : counts) {
    EXPECT_TRUE(bits == "00" || bits == "11") << bits;
    total += k;
  }
  EXPECT_EQ(total, 1000u);
}

TEST(Sampling, BitstringCharacterIsQubit) {
  Circuit c(3);
  c.x(0);
  const auto counts = sample_counts(simulate(c, {}), 10, 1);
  ASSERT_EQ(counts.size(), 1u);
  EXPECT_EQ(counts.begin()->first, "100");
}

TEST(Sampling, ZeroShotsRejected) {
  EXPECT_THROW(ShotBudget::shots(0), std::invalid_argument);
  EXPECT_THROW(sample_counts(Statevector(1), 0, 1), std::invalid_argument);
}

TEST(Seeds, PerTermSubSeedsAreStable) {
  // Appending a term must not change the samples drawn for earlier terms.
  const auto c = build_ansatz({AnsatzKind::RA, 2, 1});
  const std::vector<double> params{0.1, 0.2, 0.3, 0.4};
  const auto h1 = parse_hamiltonian("XX 1.0\nZI 0.5");
  const auto h2 = parse_hamiltonian("XX 1.0\nZI 0.5\nYY 0.0");
  const auto shots = ShotBudget::shots(256);
  EXPECT_EQ(hamiltonian_energy(c, params, h1.terms(), shots, 9), hamiltonian_energy(c, params, h2.terms(), shots, 9));
}

}  // namespace
}  // namespace driftskip
