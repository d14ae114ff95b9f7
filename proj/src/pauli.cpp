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

#include "syksim/pauli.hpp"

#include <bit>
#include <ostream>
#include <stdexcept>

namespace syksim {

namespace {

std::uint64_t low_bits_mask(int n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Exponent of i in sigma_a * sigma_b, indexed by (x<<1)|z: 0=I, 1=Z, 2=X, 3=Y.
// E.g. X*Z = -iY (exponent 3), Z*X = iY (exponent 1), X*Y = iZ (exponent 1).
constexpr int kProductPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

} // namespace

PauliString::PauliString(int n_qubits) : PauliString(n_qubits, 0, 0, 0) {}

PauliString::PauliString(int n_qubits, std::uint64_t x_bits, std::uint64_t z_bits,
                         int phase_exponent)
    : n_qubits_(n_qubits), x_bits_(x_bits), z_bits_(z_bits),
      phase_exponent_(((phase_exponent % 4) + 4) % 4) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("PauliString: qubit count must be in [1, 64], got " +
                                    std::to_string(n_qubits));
    }
    const std::uint64_t mask = low_bits_mask(n_qubits);
    if ((x_bits & ~mask) != 0 || (z_bits & ~mask) != 0) {
        throw std::invalid_argument("PauliString: bitmask uses qubits beyond n_qubits");
    }
}

PauliString PauliString::from_text(std::string_view text) {
    std::size_t pos = 0;
    int k = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') {
            k = 2;
        }
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        k += 1;
        ++pos;
    }
    const std::string_view letters = text.substr(pos);
    if (letters.empty()) {
        throw std::invalid_argument("PauliString: empty letter string in \"" + std::string(text) +
                                    "\"");
    }
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (std::size_t q = 0; q < letters.size(); ++q) {
        switch (letters[q]) {
        case 'I':
            break;
        case 'X':
            x |= std::uint64_t{1} << q;
            break;
        case 'Y':
            x |= std::uint64_t{1} << q;
            z |= std::uint64_t{1} << q;
            break;
        case 'Z':
            z |= std::uint64_t{1} << q;
            break;
        default:
            throw std::invalid_argument("PauliString: bad letter '" +
                                        std::string(1, letters[q]) + "' in \"" +
                                        std::string(text) + "\"");
        }
    }
    return PauliString(static_cast<int>(letters.size()), x, z, k);
}

std::complex<double> PauliString::phase() const {
    switch (phase_exponent_) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

int PauliString::weight() const { return std::popcount(x_bits_ | z_bits_); }

PauliString PauliString::with_phase_exponent(int k) const {
    return PauliString(n_qubits_, x_bits_, z_bits_, k);
}

char PauliString::letter(int qubit) const {
    const bool x = (x_bits_ >> qubit) & 1;
    const bool z = (z_bits_ >> qubit) & 1;
    if (x && z) {
        return 'Y';
    }
    if (x) {
        return 'X';
    }
    if (z) {
        return 'Z';
    }
    return 'I';
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(n_qubits_) + 2);
    out += (phase_exponent_ >= 2) ? '-' : '+';
    if (phase_exponent_ & 1) {
        out += 'i';
    }
    for (int q = 0; q < n_qubits_; ++q) {
        out += letter(q);
    }
    return out;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("multiply: qubit count mismatch (" +
                                    std::to_string(a.n_qubits()) + " vs " +
                                    std::to_string(b.n_qubits()) + ")");
    }
    int k = a.phase_exponent() + b.phase_exponent();
    for (int q = 0; q < a.n_qubits(); ++q) {
        const int ca = static_cast<int>(((a.x_bits() >> q) & 1) << 1 | ((a.z_bits() >> q) & 1));
        const int cb = static_cast<int>(((b.x_bits() >> q) & 1) << 1 | ((b.z_bits() >> q) & 1));
        k += kProductPhase[ca][cb];
    }
    return PauliString(a.n_qubits(), a.x_bits() ^ b.x_bits(), a.z_bits() ^ b.z_bits(), k);
}

bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("commutes: qubit count mismatch");
    }
    const int anti =
        std::popcount(a.x_bits() & b.z_bits()) + std::popcount(a.z_bits() & b.x_bits());
    return (anti & 1) == 0;
}

PauliString majorana_to_pauli(int index, int n_qubits) {
    if (index < 1 || index > 2 * n_qubits) {
        throw std::out_of_range("majorana_to_pauli: index " + std::to_string(index) +
                                " not in [1, " + std::to_string(2 * n_qubits) + "]");
    }
    const int qubit = (index - 1) / 2; // paper's 1-based site i maps to qubit i-1
    std::uint64_t z = low_bits_mask(qubit);
    std::uint64_t x = std::uint64_t{1} << qubit;
    if (index % 2 == 0) {
        z |= std::uint64_t{1} << qubit; // even index carries Y on the site
    }
    return PauliString(n_qubits, x, z, 0);
}

std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.str(); }

} // namespace syksim
