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

#include "driftskip/pauli.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace driftskip {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) {
    throw std::invalid_argument("Pauli string must act on at least one qubit");
  }
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> ops;
  ops.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': ops.push_back(Pauli::I); break;
      case 'X': ops.push_back(Pauli::X); break;
      case 'Y': ops.push_back(Pauli::Y); break;
      case 'Z': ops.push_back(Pauli::Z); break;
      default:
        throw std::invalid_argument("invalid Pauli symbol '" + std::string(1, c) +
                                    "' in \"" + std::string(text) + "\"");
    }
  }
  return PauliString(std::move(ops));
}

bool PauliString::is_identity() const {
  return std::all_of(ops_.begin(), ops_.end(), [](Pauli p) { return p == Pauli::I; });
}

std::uint64_t PauliString::flip_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y) mask |= std::uint64_t{1} << q;
  }
  return mask;
}

std::uint64_t PauliString::support_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    if (ops_[q] != Pauli::I) mask |= std::uint64_t{1} << q;
  }
  return mask;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(ops_.size());
  for (Pauli p : ops_) out.push_back(pauli_char(p));
  return out;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Hamiltonian::Hamiltonian(std::vector<PauliTerm> terms) {
  if (terms.empty()) throw StructureError("Hamiltonian has no terms");
  qubit_count_ = terms.front().string.size();
  for (const auto& t : terms) {
    if (t.string.size() != qubit_count_) {
      throw StructureError("term " + t.string.str() + " acts on " +
                           std::to_string(t.string.size()) + " qubits, expected " +
                           std::to_string(qubit_count_));
    }
    if (!std::isfinite(t.coefficient)) {
      throw StructureError("term " + t.string.str() + " has a non-finite coefficient");
    }
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const PauliTerm& u) { return u.string == t.string; });
    if (it == terms_.end()) {
      terms_.push_back(t);
    } else {
      it->coefficient += t.coefficient;
    }
  }
}

double Hamiltonian::identity_offset() const {
  double offset = 0.0;
  for (const auto& t : terms_) {
    if (t.string.is_identity()) offset += t.coefficient;
  }
  return offset;
}

std::vector<PauliTerm> Hamiltonian::non_identity_terms() const {
  std::vector<PauliTerm> out;
  for (const auto& t : terms_) {
    if (!t.string.is_identity()) out.push_back(t);
  }
  return out;
}

double Hamiltonian::abs_coefficient_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

Hamiltonian parse_hamiltonian(std::string_view text) {
  std::vector<PauliTerm> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word) || word.front() == '#') continue;
    std::string coeff_text;
    if (!(fields >> coeff_text)) throw ParseError(line_no, "missing coefficient");
    std::string extra;
    if (fields >> extra && extra.front() != '#') {
      throw ParseError(line_no, "unexpected trailing field '" + extra + "'");
    }
    PauliString ps;
    try {
      ps = PauliString::parse(word);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    double coeff = 0.0;
    const char* first = coeff_text.data();
    const char* last = first + coeff_text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, coeff);
    if (ec != std::errc() || ptr != last || !std::isfinite(coeff)) {
      throw ParseError(line_no, "invalid coefficient '" + coeff_text + "'");
    }
    terms.push_back({std::move(ps), coeff});
  }
  return Hamiltonian(std::move(terms));
}

Hamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Hamiltonian file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_hamiltonian(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  } catch (const StructureError& e) {
    throw StructureError(path + ": " + e.what());
  }
}

double SubsetPartition::prime_share() const {
  double prime_sum = 0.0;
  double total = 0.0;
  for (const auto& t : prime) prime_sum += std::abs(t.coefficient);
  total = prime_sum;
  for (const auto& t : minor) total += std::abs(t.coefficient);
  return total > 0.0 ? prime_sum / total : 1.0;
}

SubsetPartition partition_prime_minor(const Hamiltonian& h, double th_p) {
  if (!(th_p > 0.0 && th_p <= 1.0)) {
    throw std::invalid_argument("prime threshold must lie in (0, 1]");
  }
  std::vector<PauliTerm> ranked = h.non_identity_terms();
  if (ranked.empty()) {
    throw StructureError("degenerate Hamiltonian: only identity terms");
  }
  std::sort(ranked.begin(), ranked.end(), [](const PauliTerm& a, const PauliTerm& b) {
    double ma = std::abs(a.coefficient);
    double mb = std::abs(b.coefficient);
    if (ma != mb) return ma > mb;
    return a.string < b.string;
  });

  // Summed in rank order so that th_p = 1 selects every nonzero term exactly.
  double total = 0.0;
  for (const auto& t : ranked) total += std::abs(t.coefficient);
  const double target = th_p * total;

  std::size_t cut = 0;
  double running = 0.0;
  while (cut < ranked.size()) {
    running += std::abs(ranked[cut].coefficient);
    ++cut;
    if (running >= target) break;
  }

  SubsetPartition part;
  part.prime.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(cut));
  part.minor.assign(ranked.begin() + static_cast<std::ptrdiff_t>(cut), ranked.end());
  part.identity_offset = h.identity_offset();
  part.threshold = th_p;
  return part;
}

double ground_state_energy(const Hamiltonian& h) {
  const std::size_t n = h.qubit_count();
  if (n > kMaxDenseQubits) {
    throw CapacityError("dense diagonalization limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits, Hamiltonian has " + std::to_string(n));
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  // <x ^ flip| P |x> = i^{#Y} (-1)^{popcount(x & (Y|Z sites))}
  for (const auto& t : h.terms()) {
    const std::uint64_t flip = t.string.flip_mask();
    std::uint64_t phase_mask = 0;
    int y_count = 0;
    for (std::size_t q = 0; q < n; ++q) {
      Pauli p = t.string[q];
      if (p == Pauli::Y || p == Pauli::Z) phase_mask |= std::uint64_t{1} << q;
      if (p == Pauli::Y) ++y_count;
    }
    static const std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> base = kIPow[y_count % 4] * t.coefficient;
    for (std::uint64_t x = 0; x < dim; ++x) {
      double sign = (std::popcount(x & phase_mask) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(x ^ flip), static_cast<Eigen::Index>(x)) += base * sign;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed to converge");
  }
  return solver.eigenvalues().minCoeff();
}

double expectation_from_counts(const Counts& counts, const PauliString& p) {
  std::uint64_t total = 0;
  double signed_sum = 0.0;
  for (const auto& [bits, count] : counts) {
    if (bits.size() != p.size()) {
      throw std::invalid_argument("bitstring '" + bits + "' does not match a " +
                                  std::to_string(p.size()) + "-qubit observable");
    }
    int parity = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (p[q] != Pauli::I && bits[q] == '1') parity ^= 1;
    }
    total += count;
    signed_sum += parity ? -static_cast<double>(count) : static_cast<double>(count);
  }
  if (total == 0) throw std::invalid_argument("empty sample: total count is zero");
  return signed_sum / static_cast<double>(total);
}

}  // namespace driftskip
