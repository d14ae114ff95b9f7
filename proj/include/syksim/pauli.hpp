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

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace syksim {

/// An n-qubit Pauli operator in symplectic form with an exact phase.
///
/// The operator is phase() * (sigma_0 x sigma_1 x ... x sigma_{n-1}) where
/// sigma_q is I, X, Y or Z according to the (x, z) bit pair of qubit q:
/// (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y. The phase is i^k with k tracked as an
/// integer mod 4, so products are exact. Qubit 0 is the leftmost letter in
/// the text form. Immutable after construction.
class PauliString {
  public:
    static constexpr int kMaxQubits = 64;

    /// Identity on n qubits.
    explicit PauliString(int n_qubits);

    PauliString(int n_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int phase_exponent = 0);

    static PauliString identity(int n_qubits) { return PauliString(n_qubits); }

    /// Parses the text form "[+|-][i]LLL..." with L in {I,X,Y,Z}; the sign
    /// and i are optional. Inverse of str().
    static PauliString from_text(std::string_view text);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t x_bits() const { return x_bits_; }
    std::uint64_t z_bits() const { return z_bits_; }

    /// Exponent k of the i^k phase, in {0,1,2,3}.
    int phase_exponent() const { return phase_exponent_; }
    std::complex<double> phase() const;

    /// Number of non-identity tensor factors.
    int weight() const;

    bool is_identity() const { return x_bits_ == 0 && z_bits_ == 0 && phase_exponent_ == 0; }

    /// True iff the operator is Hermitian (phase is +1 or -1).
    bool is_hermitian() const { return (phase_exponent_ & 1) == 0; }

    PauliString with_phase_exponent(int k) const;

    /// Letter of qubit q: 'I', 'X', 'Y' or 'Z'.
    char letter(int qubit) const;

    /// Text form "+XYZI...", leftmost letter = qubit 0.
    std::string str() const;

    bool operator==(const PauliString& other) const = default;

  private:
    int n_qubits_;
    std::uint64_t x_bits_;
    std::uint64_t z_bits_;
    int phase_exponent_;
};

/// Operator product a*b with exact accumulated phase.
PauliString multiply(const PauliString& a, const PauliString& b);

inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

/// True iff [a, b] = 0, decided by the symplectic inner product.
bool commutes(const PauliString& a, const PauliString& b);

/// Jordan-Wigner image of the Majorana operator with 1-based index in
/// [1, 2*n_qubits]: odd 2i-1 -> Z...Z X on qubit i-1, even 2i -> Z...Z Y.
/// The images are Hermitian and square to the identity.
PauliString majorana_to_pauli(int index, int n_qubits);

std::ostream& operator<<(std::ostream& os, const PauliString& p);

} // namespace syksim
