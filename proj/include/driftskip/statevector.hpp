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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftskip/pauli.hpp"

namespace driftskip {

enum class GateKind : std::uint8_t { H, S, Sdg, X, RX, RY, RZ, CX, CZ };

bool is_two_qubit(GateKind kind);
bool is_parameterized(GateKind kind);

struct Gate {
  GateKind kind = GateKind::H;
  std::uint32_t target0 = 0;
  std::uint32_t target1 = 0;
  /// Rotation gates read their angle from this slot when set, otherwise
  /// from `angle`.
  std::optional<std::size_t> param_slot{};
  double angle = 0.0;
};

using ParameterVector = std::vector<double>;

class Circuit {
 public:
  explicit Circuit(std::size_t qubit_count);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t parameter_count() const { return parameter_count_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& h(std::uint32_t q);
  Circuit& s(std::uint32_t q);
  Circuit& sdg(std::uint32_t q);
  Circuit& x(std::uint32_t q);
  Circuit& cx(std::uint32_t control, std::uint32_t target);
  Circuit& cz(std::uint32_t a, std::uint32_t b);
  /// Rotation with a fixed angle.
  Circuit& rotation(GateKind kind, std::uint32_t q, double angle);
  /// Rotation bound to the next free parameter slot.
  Circuit& parameterized(GateKind kind, std::uint32_t q);

  std::size_t entangling_gate_count() const;

 private:
  Circuit& push(Gate g);

  std::size_t qubit_count_;
  std::size_t parameter_count_ = 0;
  std::vector<Gate> gates_;
};

enum class AnsatzKind { RA, SU2 };

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::RA;
  std::size_t qubit_count = 1;
  std::size_t reps = 1;
};

std::string ansatz_kind_name(AnsatzKind kind);
AnsatzKind parse_ansatz_kind(const std::string& name);

/// Real-amplitudes (RY layers) or two-axis SU2 (RY then RZ layers) template
/// with a linear CX chain between rotation layers and a closing rotation
/// layer. RA has qubits*(reps+1) parameters, SU2 twice that.
Circuit build_ansatz(const AnsatzSpec& spec);

class Statevector {
 public:
  explicit Statevector(std::size_t qubit_count);

  std::size_t qubit_count() const { return qubit_count_; }
  std::span<const std::complex<double>> amplitudes() const { return amps_; }
  std::complex<double>& operator[](std::size_t i) { return amps_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

  void apply(const Gate& gate, double angle);
  void apply_1q(std::uint32_t q, const std::complex<double> (&u)[2][2]);

 private:
  std::size_t qubit_count_;
  std::vector<std::complex<double>> amps_;
};

/// Applies `circuit` to |0...0>.
Statevector simulate(const Circuit& circuit, std::span<const double> params);

/// Analytic <psi|P|psi>.
double exact_expectation(const Statevector& psi, const PauliString& p);

/// Rotates each non-identity site into the Z basis: X -> H, Y -> S^dagger
/// then H.
void apply_basis_rotation(Statevector& psi, const PauliString& p);

/// <Z...Z> on the sites in `mask` for an already-rotated state.
double z_parity_expectation(const Statevector& psi, std::uint64_t mask);

/// Samples `shots` Z-basis outcomes of `psi`. Character k of each key is
/// qubit k.
Counts sample_counts(const Statevector& psi, std::uint64_t shots, std::uint64_t seed);

/// Either analytic expectations or a fixed number of samples per circuit.
class ShotBudget {
 public:
  static ShotBudget exact() { return ShotBudget(0); }
  /// Throws std::invalid_argument for zero.
  static ShotBudget shots(std::uint64_t n);

  bool is_exact() const { return shots_ == 0; }
  std::uint64_t count() const { return shots_; }

 private:
  explicit ShotBudget(std::uint64_t n) : shots_(n) {}
  std::uint64_t shots_;
};

/// splitmix64 finalizer. Used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

double observable_expectation(const Circuit& circuit, std::span<const double> params,
                              const PauliString& p, ShotBudget shots, std::uint64_t rng_seed);

/// Same as above against a prepared state, so one simulation can serve many
/// observable circuits.
double observable_expectation(const Statevector& psi, const PauliString& p, ShotBudget shots,
                              std::uint64_t rng_seed);

/// Sum of c_i <P_i> over `terms` plus `identity_offset`. Term i samples with
/// sub-seed mix_seed(rng_seed, i).
double hamiltonian_energy(const Circuit& circuit, std::span<const double> params,
                          std::span<const PauliTerm> terms, ShotBudget shots,
                          std::uint64_t rng_seed, double identity_offset = 0.0);

}  // namespace driftskip
