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

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "syksim/pauli.hpp"

namespace syksim {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

using CountsMap = std::map<std::string, std::uint64_t>;

/// Dense n-qubit state of 2^n amplitudes. Basis index bit q holds the value
/// of qubit q. Owned by one thread at a time; gate kernels mutate in place.
class Statevector {
  public:
    static constexpr int kMaxQubits = 24;

    /// |0...0> on n qubits.
    explicit Statevector(int n_qubits);

    /// Adopts an amplitude array whose length must be a power of two; the
    /// norm must be 1 within 1e-10.
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t basis_index) const { return amplitudes_[basis_index]; }

    double norm() const;

    void apply_single_qubit(const Matrix2& matrix, int target);
    void apply_hadamard(int target);
    void apply_cx(int control, int target);
    void apply_cz(int a, int b);
    void apply_cswap(int control, int a, int b);

    /// Left-multiplies by the Pauli operator, including its phase.
    void apply_pauli(const PauliString& p);

    /// state <- exp(-i theta P) state = cos(theta) state - i sin(theta) P state,
    /// in one pass over amplitude pairs. P must be Hermitian.
    void apply_pauli_rotation(const PauliString& p, double theta);

    /// Marginal distribution of the target qubits: entry m is the probability
    /// of the outcome whose bit j equals the value of targets[j].
    std::vector<double> marginal_probabilities(std::span<const int> targets) const;

  private:
    void check_target(int target) const;

    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Multinomial sample of `shots` outcomes from the marginal distribution of
/// the target qubits. Keys are bitstrings with character j = value of
/// targets[j]. Deterministic given the seed.
CountsMap sample_counts(const Statevector& state, std::span<const int> targets,
                        std::uint64_t shots, std::uint64_t seed);

/// Outcome index -> bitstring key ("01..." with character j = bit j).
std::string bits_to_string(std::uint64_t outcome, int n_bits);
std::uint64_t string_to_bits(std::string_view s);

} // namespace syksim
