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
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace driftskip {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

/// Tensor product of single-qubit Paulis. Character k of the text form acts
/// on qubit k.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> ops);

  /// Throws std::invalid_argument on an empty string or a symbol outside
  /// {I, X, Y, Z}.
  static PauliString parse(std::string_view text);

  std::size_t size() const { return ops_.size(); }
  Pauli operator[](std::size_t site) const { return ops_[site]; }
  const std::vector<Pauli>& ops() const { return ops_; }

  bool is_identity() const;

  /// Bit q set iff site q carries X or Y (the sites the operator flips).
  std::uint64_t flip_mask() const;
  /// Bit q set iff site q is not the identity.
  std::uint64_t support_mask() const;

  std::string str() const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> ops_;
};

struct PauliTerm {
  PauliString string;
  double coefficient = 0.0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Thrown when terms disagree on qubit count or an operation cannot accept
/// the Hamiltonian's shape.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weighted sum of Pauli strings. Terms keep first-appearance order and
/// equal strings are merged on construction.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(std::vector<PauliTerm> terms);

  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t qubit_count() const { return qubit_count_; }

  /// Coefficient of the all-identity string, 0 when absent.
  double identity_offset() const;
  std::vector<PauliTerm> non_identity_terms() const;
  double abs_coefficient_sum() const;

 private:
  std::vector<PauliTerm> terms_;
  std::size_t qubit_count_ = 0;
};

/// Parses the plain-text format: one `<PauliString> <coefficient>` per
/// line, `#` comments and blank lines ignored.
Hamiltonian parse_hamiltonian(std::string_view text);
Hamiltonian load_hamiltonian(const std::string& path);

struct SubsetPartition {
  std::vector<PauliTerm> prime;
  std::vector<PauliTerm> minor;
  double identity_offset = 0.0;
  double threshold = 1.0;

  /// Share of the non-identity |coefficient| mass carried by the prime set.
  double prime_share() const;
};

/// Splits the non-identity terms into the dominant-coefficient prefix that
/// reaches `th_p` of the total |coefficient| mass, and the remainder.
///
/// Terms are ranked by descending |coefficient|, ties broken by the string's
/// text order. The identity term never becomes an observable circuit; it is
/// carried as `identity_offset`. The prime set is never empty.
SubsetPartition partition_prime_minor(const Hamiltonian& h, double th_p);

inline constexpr std::size_t kMaxDenseQubits = 12;

/// Smallest eigenvalue of the dense 2^n x 2^n matrix of `h`.
double ground_state_energy(const Hamiltonian& h);

using Counts = std::map<std::string, std::uint64_t>;

/// Parity estimate of `p` from Z-basis samples taken after basis rotation.
/// Bitstring character k is the outcome of qubit k.
double expectation_from_counts(const Counts& counts, const PauliString& p);

}  // namespace driftskip
