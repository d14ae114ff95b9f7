// Copyright 2026 The syksim developers.
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
#include <iosfwd>
#include <map>
#include <vector>

#include "syksim/pauli.hpp"

namespace syksim {

/// Parameters of an SYK instance: N Majorana fermions with all-to-all
/// random q-body couplings of overall scale j_scale, drawn from the RNG
/// stream identified by seed.
struct SykParams {
    int n_majorana = 6;
    int q = 4;
    double j_scale = 1.0;
    std::uint64_t seed = 0;

    int n_qubits() const { return n_majorana / 2; }

    /// Coupling variance (q-1)! * j_scale^2 / N^(q-1).
    double coupling_variance() const;

    /// Throws std::invalid_argument unless N and q are even, 2 <= q <= N,
    /// N/2 >= 2 and j_scale > 0.
    void validate() const;
};

struct SykTerm {
    double coefficient = 0.0;
    PauliString op;
    std::vector<int> majorana_indices; // the 1-based tuple i1 < ... < iq

    SykTerm() : op(1) {}
    SykTerm(double c, PauliString p, std::vector<int> idx);
};

/// Pauli-sum form of the SYK Hamiltonian: H = sum_n a_n P_n with exactly
/// binomial(N, q) terms, ordered lexicographically by Majorana index tuple.
/// Every P_n is Hermitian with phase exponent 0; the coefficients absorb
/// the +-1 phase of the Majorana product. Immutable once built.
struct SykHamiltonian {
    SykParams params;
    std::vector<SykTerm> terms;
    int n_qubits = 0;
};

/// One i.i.d. Gaussian draw per ordered index tuple 1 <= i1 < ... < iq <= N,
/// with variance (q-1)! * j_scale^2 / N^(q-1). Deterministic given the seed;
/// the map iterates tuples in lexicographic order.
std::map<std::vector<int>, double> sample_couplings(const SykParams& params);

/// Builds the Pauli-sum Hamiltonian by multiplying Jordan-Wigner Majorana
/// images. Throws std::logic_error if any product phase is not +-1 after
/// the i^(q/2) prefactor (cannot happen for valid inputs).
SykHamiltonian build_hamiltonian(const SykParams& params);

/// Number of terms binomial(n, k) as an exact integer.
std::uint64_t binomial(int n, int k);

/// Plain-text serialization; doubles are written with 17 significant digits
/// so save/load round-trips bit-exactly.
void save_hamiltonian(const SykHamiltonian& h, std::ostream& os);
SykHamiltonian load_hamiltonian(std::istream& is);

} // namespace syksim
