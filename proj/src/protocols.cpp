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

#include "syksim/protocols.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace syksim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_subsystem(const std::vector<int>& subsystem, int n_qubits) {
    if (subsystem.empty()) {
        throw std::invalid_argument("protocol: subsystem is empty");
    }
    if (static_cast<int>(subsystem.size()) > n_qubits) {
        throw std::invalid_argument("protocol: subsystem wider than register");
    }
    std::set<int> seen;
    for (int q : subsystem) {
        if (q < 0 || q >= n_qubits) {
            throw std::out_of_range("protocol: subsystem qubit out of range");
        }
        if (!seen.insert(q).second) {
            throw std::invalid_argument("protocol: duplicate subsystem qubit");
        }
    }
}

// Re-targets a gate by a constant qubit offset into a wider register.
Gate shift_gate(const Gate& g, int offset, int new_width) {
    Gate out = g;
    if (out.target >= 0) {
        out.target += offset;
    }
    if (out.control >= 0) {
        out.control += offset;
    }
    if (out.target2 >= 0) {
        out.target2 += offset;
    }
    for (int& q : out.targets) {
        q += offset;
    }
    if (g.kind == GateKind::PauliRotation) {
        out.pauli = PauliString(new_width, g.pauli.x_bits() << offset,
                                g.pauli.z_bits() << offset, g.pauli.phase_exponent());
    }
    return out;
}

// Hamming-distance kernel sum_{s,s'} (-2)^{-D} w(s) w(s') computed in
// O(4^L) over the outcome weights.
double hamming_kernel_quadratic(std::span<const double> weights) {
    static const auto kKernel = [] {
        std::array<double, 33> k{};
        k[0] = 1.0;
        for (std::size_t d = 1; d < k.size(); ++d) {
            k[d] = k[d - 1] * -0.5;
        }
        return k;
    }();
    const std::size_t dim = weights.size();
    double total = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
        if (weights[s] == 0.0) {
            continue;
        }
        for (std::size_t sp = 0; sp < dim; ++sp) {
            total += weights[s] * weights[sp] * kKernel[std::popcount(s ^ sp)];
        }
    }
    return total;
}

} // namespace

Circuit build_swap_test_circuit(const SwapMbiJob& job) {
    const int n = job.base_circuit.n_qubits();
    check_subsystem(job.subsystem, n);
    if (job.base_circuit.has_measurement()) {
        throw std::invalid_argument("build_swap_test_circuit: base circuit must be unitary");
    }
    const int total = 2 * n + 1;
    if (total > Statevector::kMaxQubits) {
        throw std::invalid_argument("build_swap_test_circuit: " + std::to_string(total) +
                                    " qubits exceed the engine limit");
    }
    const int ancilla = 2 * n;

    Circuit circuit(total);
    for (const Gate& g : job.base_circuit.gates()) {
        circuit.append(shift_gate(g, 0, total));
    }
    for (const Gate& g : job.base_circuit.gates()) {
        circuit.append(shift_gate(g, n, total));
    }
    circuit.append(Gate::hadamard(ancilla));
    for (int q : job.subsystem) {
        circuit.append(Gate::cswap(ancilla, q, q + n));
    }
    circuit.append(Gate::hadamard(ancilla));
    circuit.append(Gate::measure({ancilla}));
    return circuit;
}

EntropyEstimate swap_estimate_from_p0(double p0, std::uint64_t shots) {
    EntropyEstimate est;
    est.protocol = "swap_mbi";
    est.shots = shots;
    est.purity = 2.0 * p0 - 1.0;
    if (shots > 0) {
        const double sigma_p0 = std::sqrt(std::max(p0 * (1.0 - p0), 0.0) /
                                          static_cast<double>(shots));
        est.purity_std_error = 2.0 * sigma_p0;
    }
    if (est.purity > 0.0) {
        est.renyi2 = -std::log(est.purity);
        est.renyi2_std_error = est.purity_std_error / est.purity;
    } else {
        est.entropy_defined = false;
        est.renyi2 = kNaN;
        est.renyi2_std_error = kNaN;
    }
    return est;
}

EntropyEstimate estimate_purity_swap(const CountsMap& ancilla_counts) {
    if (ancilla_counts.empty()) {
        throw std::invalid_argument("estimate_purity_swap: empty counts");
    }
    std::uint64_t shots = 0;
    std::uint64_t zeros = 0;
    for (const auto& [bits, count] : ancilla_counts) {
        if (bits.size() != 1) {
            throw std::invalid_argument("estimate_purity_swap: expected single-bit keys");
        }
        shots += count;
        if (bits == "0") {
            zeros = count;
        }
    }
    return swap_estimate_from_p0(static_cast<double>(zeros) / static_cast<double>(shots),
                                 shots);
}

Matrix2 sample_cue_unitary(Rng& rng) {
    // Two complex Gaussian columns, orthonormalized with real positive
    // pivots; the resulting Q is CUE-distributed.
    Complex a{rng.gaussian(), rng.gaussian()};
    Complex c{rng.gaussian(), rng.gaussian()};
    const double norm1 = std::sqrt(std::norm(a) + std::norm(c));
    a /= norm1;
    c /= norm1;

    Complex b{rng.gaussian(), rng.gaussian()};
    Complex d{rng.gaussian(), rng.gaussian()};
    const Complex overlap = std::conj(a) * b + std::conj(c) * d;
    b -= overlap * a;
    d -= overlap * c;
    const double norm2 = std::sqrt(std::norm(b) + std::norm(d));
    b /= norm2;
    d /= norm2;

    return Matrix2{a, b, c, d};
}

int hamming_distance(std::string_view s, std::string_view s_prime) {
    if (s.size() != s_prime.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    int d = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        d += (s[i] != s_prime[i]) ? 1 : 0;
    }
    return d;
}

double rm_x_statistic(std::span<const double> probs) {
    if (probs.empty() || !std::has_single_bit(probs.size())) {
        throw std::invalid_argument("rm_x_statistic: outcome count must be a power of two");
    }
    const int n_bits = std::countr_zero(probs.size());
    return std::ldexp(hamming_kernel_quadratic(probs), n_bits);
}

double rm_x_statistic_unbiased(std::span<const std::uint64_t> tallies) {
    if (tallies.empty() || !std::has_single_bit(tallies.size())) {
        throw std::invalid_argument("rm_x_statistic_unbiased: outcome count must be a power "
                                    "of two");
    }
    std::uint64_t shots = 0;
    for (std::uint64_t n : tallies) {
        shots += n;
    }
    if (shots < 2) {
        throw std::invalid_argument("rm_x_statistic_unbiased: needs >= 2 shots");
    }
    std::vector<double> weights(tallies.size());
    for (std::size_t s = 0; s < tallies.size(); ++s) {
        weights[s] = static_cast<double>(tallies[s]);
    }
    // Remove the m == m' diagonal (D = 0, kernel 1) before normalizing by
    // the number of ordered shot pairs.
    const double pair_sum = hamming_kernel_quadratic(weights) - static_cast<double>(shots);
    const int n_bits = std::countr_zero(tallies.size());
    const double m = static_cast<double>(shots);
    return std::ldexp(pair_sum / (m * (m - 1.0)), n_bits);
}

std::vector<Matrix2> rm_unitaries_for(std::uint64_t seed, std::uint64_t unitary_index,
                                      std::size_t n_qubits) {
    Rng rng(derive_seed(seed, unitary_index));
    std::vector<Matrix2> us;
    us.reserve(n_qubits);
    for (std::size_t i = 0; i < n_qubits; ++i) {
        us.push_back(sample_cue_unitary(rng));
    }
    return us;
}

double rm_xbar_exact(const Statevector& state, std::span<const int> subsystem,
                     std::uint64_t n_unitaries, std::uint64_t seed, double* xbar_std_error) {
    if (n_unitaries < 1) {
        throw std::invalid_argument("rm_xbar_exact: need at least one unitary");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t a = 0; a < n_unitaries; ++a) {
        const std::vector<Matrix2> us = rm_unitaries_for(seed, a, subsystem.size());
        Statevector rotated = state;
        for (std::size_t i = 0; i < subsystem.size(); ++i) {
            rotated.apply_single_qubit(us[i], subsystem[i]);
        }
        const double x = rm_x_statistic(rotated.marginal_probabilities(subsystem));
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / static_cast<double>(n_unitaries);
    if (xbar_std_error != nullptr) {
        if (n_unitaries >= 2) {
            const double var =
                (sum_sq - sum * mean) / static_cast<double>(n_unitaries - 1);
            *xbar_std_error = std::sqrt(std::max(var, 0.0) /
                                        static_cast<double>(n_unitaries));
        } else {
            *xbar_std_error = 0.0;
        }
    }
    return mean;
}

std::vector<double> rm_per_unitary_x(const RandomizedMeasurementJob& job,
                                     const Backend& backend) {
    const int n = job.base_circuit.n_qubits();
    check_subsystem(job.subsystem, n);
    if (job.base_circuit.has_measurement()) {
        throw std::invalid_argument("randomized measurement: base circuit must be unitary");
    }
    if (job.n_unitaries < 2) {
        throw std::invalid_argument("randomized measurement: n_unitaries must be >= 2");
    }

    std::vector<double> xs;
    xs.reserve(job.n_unitaries);
    for (std::uint64_t a = 0; a < job.n_unitaries; ++a) {
        const std::vector<Matrix2> us = rm_unitaries_for(job.seed, a, job.subsystem.size());
        Circuit circuit = job.base_circuit;
        for (std::size_t i = 0; i < job.subsystem.size(); ++i) {
            circuit.append(Gate::unitary(us[i], job.subsystem[i], "cue"));
        }
        circuit.append(Gate::measure(job.subsystem));

        if (job.shots_per_unitary == 0) {
            xs.push_back(rm_x_statistic(backend.probabilities(circuit)));
            continue;
        }
        const CountsMap counts =
            backend.counts(circuit, job.shots_per_unitary, derive_seed(job.seed, a, 1));
        const std::size_t dim = std::size_t{1} << job.subsystem.size();
        if (job.unbiased) {
            std::vector<std::uint64_t> tallies(dim, 0);
            for (const auto& [bits, count] : counts) {
                tallies[string_to_bits(bits)] = count;
            }
            xs.push_back(rm_x_statistic_unbiased(tallies));
        } else {
            std::vector<double> probs(dim, 0.0);
            for (const auto& [bits, count] : counts) {
                probs[string_to_bits(bits)] =
                    static_cast<double>(count) / static_cast<double>(job.shots_per_unitary);
            }
            xs.push_back(rm_x_statistic(probs));
        }
    }
    return xs;
}

EntropyEstimate rm_estimate_from_x(std::span<const double> x_values,
                                   std::uint64_t shots_per_unitary) {
    if (x_values.size() < 2) {
        throw std::invalid_argument("rm_estimate_from_x: need >= 2 values");
    }
    double sum = 0.0;
    for (double x : x_values) {
        sum += x;
    }
    const double n = static_cast<double>(x_values.size());
    const double mean = sum / n;
    double var = 0.0;
    for (double x : x_values) {
        var += (x - mean) * (x - mean);
    }
    var /= (n - 1.0);

    EntropyEstimate est;
    est.protocol = "rm";
    est.n_unitaries = x_values.size();
    est.shots = shots_per_unitary * x_values.size();
    est.purity = mean;
    est.purity_std_error = std::sqrt(var / n);
    if (mean > 0.0) {
        est.renyi2 = -std::log(mean);
        est.renyi2_std_error = est.purity_std_error / mean;
    } else {
        est.entropy_defined = false;
        est.renyi2 = kNaN;
        est.renyi2_std_error = kNaN;
    }
    return est;
}

EntropyEstimate run_randomized_measurement(const RandomizedMeasurementJob& job,
                                           const Backend& backend) {
    return rm_estimate_from_x(rm_per_unitary_x(job, backend), job.shots_per_unitary);
}

double bootstrap_std_error(std::span<const double> xs, std::uint64_t resamples,
                           std::uint64_t seed) {
    if (xs.size() < 2 || resamples < 2) {
        throw std::invalid_argument("bootstrap_std_error: too few samples");
    }
    Rng rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t b = 0; b < resamples; ++b) {
        double total = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            total += xs[rng.uniform_int(xs.size())];
        }
        const double mean = total / static_cast<double>(xs.size());
        sum += mean;
        sum_sq += mean * mean;
    }
    const double n = static_cast<double>(resamples);
    const double mean_of_means = sum / n;
    const double var = std::max(sum_sq / n - mean_of_means * mean_of_means, 0.0);
    return std::sqrt(var * n / (n - 1.0));
}

} // namespace syksim
