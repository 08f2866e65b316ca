#!/usr/bin/env python3
# Copyright 2026 The driftskip Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the synthetic Hamiltonian files under data/hamiltonians.

None of these are chemistry-accurate. They reproduce the *shape* of the
benchmark molecules (qubit count, observable count, how many terms dominate
the |coefficient| mass) so that circuit accounting and subsetting behave like
the real workloads.
"""

import math
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "hamiltonians"


def random_strings(rng, qubits, count, taken):
    out = []
    while len(out) < count:
        s = "".join(rng.choice("IXYZ") for _ in range(qubits))
        if s == "I" * qubits or s in taken:
            continue
        taken.add(s)
        out.append(s)
    return out


def write(path, header, terms):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        for line in header:
            f.write(f"# {line}\n")
        for s, c in terms:
            f.write(f"{s} {c:.10g}\n")


def shaped(name, qubits, big, small_count, small_total, identity, seed, note):
    rng = random.Random(seed)
    taken = set()
    big_strings = random_strings(rng, qubits, len(big), taken)
    small_strings = random_strings(rng, qubits, small_count, taken)
    raw = [rng.uniform(0.5, 1.5) for _ in range(small_count)]
    scale = small_total / sum(raw)
    terms = [("I" * qubits, identity)]
    for s, c in zip(big_strings, big):
        terms.append((s, c if rng.random() < 0.5 else -c))
    for s, r in zip(small_strings, raw):
        c = round(r * scale, 6)
        terms.append((s, c if rng.random() < 0.5 else -c))
    write(ROOT / name, [note, f"synthetic: {qubits} qubits, {len(big) + small_count} observables",
                        "generated by tools/make_reference_data.py"], terms)


def h2_family():
    lengths = [0.35, 0.5, 0.65, 0.735, 0.85, 1.0, 1.2, 1.5, 1.9, 2.5]
    for r in lengths:
        d = r - 0.735
        ii = -1.05 + 0.9 * d * d / (1.0 + d * d) + 0.15 * math.exp(-3.0 * r) / r
        zi = 0.40 * math.exp(-0.45 * d)
        zz = -0.011 - 0.004 * d
        xx = 0.18 + 0.06 * d
        terms = [("II", ii), ("ZI", zi), ("IZ", -zi), ("ZZ", zz), ("XX", xx)]
        write(ROOT / "h2_bond" / f"h2_{r:.3f}.txt",
              [f"H2-style two-qubit family, bond length {r:.3f} angstrom",
               "synthetic smooth coefficients, not derived from an electronic-structure code",
               "generated by tools/make_reference_data.py"], terms)


def main():
    write(ROOT / "toy_2q.txt", ["three-term toy Hamiltonian: XX dominates the |coefficient| mass"],
          [("XX", 1.4), ("ZI", 0.05), ("ZX", 0.02)])
    write(ROOT / "heh_like.txt",
          ["HeH+-shaped benchmark: 4 qubits, 4 observables, 1 prime term at th_p = 0.8",
           "synthetic coefficients"],
          [("IIII", -2.0), ("XXII", -1.6), ("ZIII", 0.07), ("IIZZ", -0.05), ("IZIX", 0.03)])
    shaped("lih_like.txt", 6, [0.6, 0.5, 0.4, 0.3], 9, 0.3, -7.8, 11,
           "LiH-shaped benchmark: 13 observables, 4 prime terms at th_p = 0.8")
    shaped("hf_like.txt", 8, [0.9, 0.8, 0.7, 0.6, 0.55, 0.5, 0.45, 0.4], 68, 1.0, -98.5, 7,
           "HF-shaped benchmark: 76 observables, 8 prime terms at th_p = 0.8")
    h2_family()


if __name__ == "__main__":
    main()
