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

#include "syksim/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "syksim/rng.hpp"

namespace syksim {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("Statevector: qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = Complex{1.0, 0.0};
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    if (amplitudes.empty() || !std::has_single_bit(amplitudes.size())) {
        throw std::invalid_argument("Statevector: amplitude count must be a power of two");
    }
    const int n = std::countr_zero(amplitudes.size());
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("Statevector: unsupported qubit count");
    }
    Statevector state(n);
    state.amplitudes_ = std::move(amplitudes);
    if (std::abs(state.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("Statevector: amplitudes are not normalized");
    }
    return state;
}

double Statevector::norm() const {
    double sum = 0.0;
    for (const Complex& a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void Statevector::check_target(int target) const {
    if (target < 0 || target >= n_qubits_) {
        throw std::out_of_range("Statevector: target qubit " + std::to_string(target) +
                                " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
}

void Statevector::apply_single_qubit(const Matrix2& m, int target) {
    check_target(target);
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;

    // Explicit real/imag arithmetic; complex<double> operator* blocks
    // vectorization of this hot loop.
    const double m00r = m[0].real(), m00i = m[0].imag();
    const double m01r = m[1].real(), m01i = m[1].imag();
    const double m10r = m[2].real(), m10i = m[2].imag();
    const double m11r = m[3].real(), m11i = m[3].imag();

    double* amps = reinterpret_cast<double*>(amplitudes_.data());
    const std::size_t half = amplitudes_.size() >> 1;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = (((i & hi_mask) << 1) | (i & lo_mask)) << 1;
        const std::size_t i1 = i0 | (mask << 1);
        const double a0r = amps[i0];
        const double a0i = amps[i0 + 1];
        const double a1r = amps[i1];
        const double a1i = amps[i1 + 1];
        amps[i0] = m00r * a0r - m00i * a0i + m01r * a1r - m01i * a1i;
        amps[i0 + 1] = m00r * a0i + m00i * a0r + m01r * a1i + m01i * a1r;
        amps[i1] = m10r * a0r - m10i * a0i + m11r * a1r - m11i * a1i;
        amps[i1 + 1] = m10r * a0i + m10i * a0r + m11r * a1i + m11i * a1r;
    }
}

void Statevector::apply_hadamard(int target) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    apply_single_qubit(Matrix2{Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                               Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0}},
                       target);
}

void Statevector::apply_cx(int control, int target) {
    check_target(control);
    check_target(target);
    if (control == target) {
        throw std::invalid_argument("apply_cx: control equals target");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    const std::size_t dim = amplitudes_.size();
    // Swap the target pair within the control=1, target=0 subspace.
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

void Statevector::apply_cz(int a, int b) {
    check_target(a);
    check_target(b);
    if (a == b) {
        throw std::invalid_argument("apply_cz: qubits must differ");
    }
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) {
            amplitudes_[i] = -amplitudes_[i];
        }
    }
}

void Statevector::apply_cswap(int control, int a, int b) {
    check_target(control);
    check_target(a);
    check_target(b);
    if (control == a || control == b || a == b) {
        throw std::invalid_argument("apply_cswap: qubits must be distinct");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t amask = std::size_t{1} << a;
    const std::size_t bmask = std::size_t{1} << b;
    const std::size_t dim = amplitudes_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) != 0 && (i & amask) != 0 && (i & bmask) == 0) {
            std::swap(amplitudes_[i], amplitudes_[(i & ~amask) | bmask]);
        }
    }
}

void Statevector::apply_pauli(const PauliString& p) {
    if (p.n_qubits() != n_qubits_) {
        throw std::invalid_argument("apply_pauli: qubit count mismatch");
    }
    const std::uint64_t x = p.x_bits();
    const std::uint64_t z = p.z_bits();
    // P|b> = i^(k + #Y) * (-1)^popcount(b & z) |b ^ x>.
    const int base_exponent = (p.phase_exponent() + std::popcount(x & z)) % 4;
    static constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::size_t dim = amplitudes_.size();

    if (x == 0) {
        for (std::size_t b = 0; b < dim; ++b) {
            const int k = (base_exponent + 2 * (std::popcount(b & z) & 1)) % 4;
            amplitudes_[b] *= kPhases[k];
        }
        return;
    }
    for (std::size_t b = 0; b < dim; ++b) {
        const std::size_t partner = b ^ x;
        if (b >= partner) {
            continue;
        }
        const int kb = (base_exponent + 2 * (std::popcount(b & z) & 1)) % 4;
        const int kp = (base_exponent + 2 * (std::popcount(partner & z) & 1)) % 4;
        const Complex vb = amplitudes_[b];
        amplitudes_[b] = kPhases[kp] * amplitudes_[partner];
        amplitudes_[partner] = kPhases[kb] * vb;
    }
}

void Statevector::apply_pauli_rotation(const PauliString& p, double theta) {
    if (p.n_qubits() != n_qubits_) {
        throw std::invalid_argument("apply_pauli_rotation: qubit count mismatch");
    }
    if (!p.is_hermitian()) {
        throw std::invalid_argument("apply_pauli_rotation: Pauli operator must be Hermitian");
    }
    const std::uint64_t x = p.x_bits();
    const std::uint64_t z = p.z_bits();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::size_t dim = amplitudes_.size();

    // P|b> = sign(b) * f |b ^ x> with f = i^(k + #Y) = +-1 or +-i and
    // sign(b) = (-1)^popcount(b & z). Hermiticity makes f real when the
    // pair phases combine, so the two-element update below is closed.
    const int f_exponent = (p.phase_exponent() + std::popcount(x & z)) % 4;
    static constexpr Complex kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex minus_i_sin_f = Complex{0, -s} * kPhases[f_exponent];

    if (x == 0) {
        // Diagonal case: amplitude picks up exp(-i theta f sign(b)) with
        // f = +-1 from the (even) phase exponent.
        const bool f_negative = f_exponent == 2;
        const Complex e_minus{c, -s};
        const Complex e_plus{c, s};
        for (std::size_t b = 0; b < dim; ++b) {
            const bool negative = ((std::popcount(b & z) & 1) != 0) != f_negative;
            amplitudes_[b] *= negative ? e_plus : e_minus;
        }
        return;
    }
    for (std::size_t b = 0; b < dim; ++b) {
        const std::size_t partner = b ^ x;
        if (b >= partner) {
            continue;
        }
        const double sign_b = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
        const double sign_p = (std::popcount(partner & z) & 1) ? -1.0 : 1.0;
        const Complex vb = amplitudes_[b];
        const Complex vp = amplitudes_[partner];
        amplitudes_[b] = c * vb + minus_i_sin_f * sign_p * vp;
        amplitudes_[partner] = c * vp + minus_i_sin_f * sign_b * vb;
    }
}

std::vector<double> Statevector::marginal_probabilities(std::span<const int> targets) const {
    if (targets.empty()) {
        throw std::invalid_argument("marginal_probabilities: empty target list");
    }
    if (targets.size() > 30) {
        throw std::invalid_argument("marginal_probabilities: too many targets");
    }
    for (std::size_t j = 0; j < targets.size(); ++j) {
        check_target(targets[j]);
        for (std::size_t k = j + 1; k < targets.size(); ++k) {
            if (targets[j] == targets[k]) {
                throw std::invalid_argument("marginal_probabilities: duplicate target");
            }
        }
    }
    std::vector<double> probs(std::size_t{1} << targets.size(), 0.0);
    const std::size_t dim = amplitudes_.size();
    for (std::size_t b = 0; b < dim; ++b) {
        std::size_t outcome = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            outcome |= ((b >> targets[j]) & 1) << j;
        }
        probs[outcome] += std::norm(amplitudes_[b]);
    }
    return probs;
}

CountsMap sample_counts(const Statevector& state, std::span<const int> targets,
                        std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("sample_counts: shots must be >= 1");
    }
    const std::vector<double> probs = state.marginal_probabilities(targets);

    std::vector<double> cumulative(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cumulative[i] = acc;
    }
    cumulative.back() = std::max(cumulative.back(), 1.0);

    Rng rng(seed);
    std::vector<std::uint64_t> tallies(probs.size(), 0);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        tallies[static_cast<std::size_t>(it - cumulative.begin())]++;
    }

    CountsMap counts;
    for (std::size_t outcome = 0; outcome < tallies.size(); ++outcome) {
        if (tallies[outcome] > 0) {
            counts.emplace(bits_to_string(outcome, static_cast<int>(targets.size())),
                           tallies[outcome]);
        }
    }
    return counts;
}

std::string bits_to_string(std::uint64_t outcome, int n_bits) {
    std::string s(static_cast<std::size_t>(n_bits), '0');
    for (int j = 0; j < n_bits; ++j) {
        if ((outcome >> j) & 1) {
            s[static_cast<std::size_t>(j)] = '1';
        }
    }
    return s;
}

std::uint64_t string_to_bits(std::string_view s) {
    std::uint64_t outcome = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == '1') {
            outcome |= std::uint64_t{1} << j;
        } else if (s[j] != '0') {
            throw std::invalid_argument("string_to_bits: bad character in bitstring");
        }
    }
    return outcome;
}

} // namespace syksim
