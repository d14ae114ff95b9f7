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

#include "syksim/noise.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "syksim/exact.hpp"

namespace syksim {

namespace {

constexpr double kPi4 = 0.78539816339744830962;

// Single-qubit Pauli matrices indexed 0=I, 1=X, 2=Y, 3=Z.
const std::array<Matrix2, 4>& pauli_matrices() {
    static const std::array<Matrix2, 4> kMats = {
        Matrix2{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}},
        Matrix2{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}},
        Matrix2{Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}},
        Matrix2{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}},
    };
    return kMats;
}

constexpr char kPauliNames[] = "IXYZ";

void apply_pauli_index(Statevector& state, int pauli_index, int qubit) {
    if (pauli_index != 0) {
        state.apply_single_qubit(pauli_matrices()[static_cast<std::size_t>(pauli_index)],
                                 qubit);
    }
}

bool is_basis_gate(const Gate& g) {
    switch (g.kind) {
    case GateKind::SingleQubitUnitary:
    case GateKind::Hadamard:
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::Measurement:
        return true;
    default:
        return false;
    }
}

struct TwirlEntry {
    int before_a = 0; // Pauli indices on (control, target) before the gate
    int before_b = 0;
    int after_a = 0; // compensating Paulis after the gate
    int after_b = 0;
    double sign = 1.0;
};

// two_qubit_pauli = P(a) kron-on-operands P(b); conjugation by the gate maps
// it to sign * P(after_a) P(after_b). Derived once from dense 4x4 algebra.
std::array<TwirlEntry, 16> build_twirl_table(bool is_cx) {
    Eigen::Matrix4cd gate = Eigen::Matrix4cd::Identity();
    // Operand a = control = index bit 0, operand b = target = index bit 1,
    // matching a two-qubit register (a, b) = qubits (0, 1).
    if (is_cx) {
        gate.setZero();
        gate(0, 0) = 1;
        gate(2, 2) = 1;
        gate(1, 3) = 1;
        gate(3, 1) = 1;
    } else {
        gate(3, 3) = -1;
    }

    auto dense_pauli = [](int pa, int pb) {
        std::string text = "+";
        text += kPauliNames[pa];
        text += kPauliNames[pb];
        return pauli_to_matrix(PauliString::from_text(text));
    };

    std::array<TwirlEntry, 16> table{};
    for (int pa = 0; pa < 4; ++pa) {
        for (int pb = 0; pb < 4; ++pb) {
            const Eigen::Matrix4cd conjugated =
                gate * dense_pauli(pa, pb) * gate.adjoint();
            bool found = false;
            for (int qa = 0; qa < 4 && !found; ++qa) {
                for (int qb = 0; qb < 4 && !found; ++qb) {
                    const Eigen::Matrix4cd candidate = dense_pauli(qa, qb);
                    for (double sign : {1.0, -1.0}) {
                        if ((conjugated - sign * candidate).cwiseAbs().maxCoeff() < 1e-12) {
                            table[static_cast<std::size_t>(pa * 4 + pb)] = {pa, pb, qa, qb,
                                                                            sign};
                            found = true;
                            break;
                        }
                    }
                }
            }
            if (!found) {
                throw std::logic_error("pauli_twirl: conjugation is not a signed Pauli");
            }
        }
    }
    return table;
}

const std::array<TwirlEntry, 16>& twirl_table(bool is_cx) {
    static const std::array<TwirlEntry, 16> kCx = build_twirl_table(true);
    static const std::array<TwirlEntry, 16> kCz = build_twirl_table(false);
    return is_cx ? kCx : kCz;
}

} // namespace

void NoiseModel::validate() const {
    auto check_prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p < 1.0)) {
            throw std::invalid_argument(std::string("NoiseModel: ") + name +
                                        " must be in [0, 1)");
        }
    };
    check_prob(two_qubit_depolarizing, "two_qubit_depolarizing");
    check_prob(single_qubit_depolarizing, "single_qubit_depolarizing");
    for (const ReadoutFlip& f : readout_flip) {
        check_prob(f.p01, "readout p01");
        check_prob(f.p10, "readout p10");
    }
    if (std::abs(coherent_zz_overrotation) >= kPi4) {
        throw std::invalid_argument("NoiseModel: |coherent overrotation| must be < pi/4");
    }
}

bool NoiseModel::has_readout_error() const {
    for (const ReadoutFlip& f : readout_flip) {
        if (f.p01 != 0.0 || f.p10 != 0.0) {
            return true;
        }
    }
    return false;
}

ReadoutFlip NoiseModel::readout_for(int qubit) const {
    if (readout_flip.empty()) {
        return {};
    }
    if (readout_flip.size() == 1) {
        return readout_flip.front();
    }
    if (qubit < 0 || static_cast<std::size_t>(qubit) >= readout_flip.size()) {
        throw std::out_of_range("NoiseModel: no readout calibration for qubit " +
                                std::to_string(qubit));
    }
    return readout_flip[static_cast<std::size_t>(qubit)];
}

std::string NoiseModel::label() const {
    std::ostringstream os;
    os << "p1=" << single_qubit_depolarizing << ",p2=" << two_qubit_depolarizing;
    if (coherent_zz_overrotation != 0.0) {
        os << ",eps=" << coherent_zz_overrotation;
    }
    if (has_readout_error()) {
        os << ",ro";
    }
    return os.str();
}

NoisyBackend::NoisyBackend(NoiseModel model, std::uint64_t max_trajectories)
    : model_(std::move(model)), max_trajectories_(max_trajectories) {
    model_.validate();
    if (max_trajectories_ < 1) {
        throw std::invalid_argument("NoisyBackend: need at least one trajectory");
    }
}

std::string NoisyBackend::label() const { return "noisy[" + model_.label() + "]"; }

CountsMap NoisyBackend::counts(const Circuit& circuit, std::uint64_t shots,
                               std::uint64_t seed) const {
    if (!circuit.has_measurement()) {
        throw std::invalid_argument("NoisyBackend: circuit has no measurement");
    }
    for (const Gate& g : circuit.gates()) {
        if (!is_basis_gate(g)) {
            throw std::invalid_argument("NoisyBackend: circuit must be decomposed to basis "
                                        "gates (offending gate: " +
                                        g.label + ")");
        }
    }
    if (shots < 1) {
        throw std::invalid_argument("NoisyBackend: shots must be >= 1");
    }

    const std::vector<int>& measured = circuit.measured_qubits();
    const double p1 = model_.single_qubit_depolarizing;
    const double p2 = model_.two_qubit_depolarizing;
    const double eps = model_.coherent_zz_overrotation;
    const bool readout = model_.has_readout_error();

    const std::uint64_t trajectories = std::min(shots, max_trajectories_);
    CountsMap counts;
    for (std::uint64_t traj = 0; traj < trajectories; ++traj) {
        // Spread shots evenly; the first (shots mod T) trajectories take one
        // extra sample.
        const std::uint64_t traj_shots =
            shots / trajectories + (traj < shots % trajectories ? 1 : 0);
        if (traj_shots == 0) {
            continue;
        }
        Rng rng(derive_seed(seed, traj));
        Statevector state(circuit.n_qubits());
        for (const Gate& g : circuit.gates()) {
            if (g.is_measurement()) {
                continue;
            }
            apply_gate(state, g);
            if (g.is_two_qubit_entangler()) {
                if (eps != 0.0) {
                    std::uint64_t zz = (std::uint64_t{1} << g.control) |
                                       (std::uint64_t{1} << g.target);
                    state.apply_pauli_rotation(PauliString(circuit.n_qubits(), 0, zz, 0),
                                               eps);
                }
                if (p2 > 0.0 && rng.uniform() < p2) {
                    // Uniform over the 15 non-identity two-qubit Paulis.
                    const int idx = static_cast<int>(rng.uniform_int(15)) + 1;
                    apply_pauli_index(state, idx & 3, g.target);
                    apply_pauli_index(state, idx >> 2, g.control);
                }
            } else if (p1 > 0.0 && rng.uniform() < p1) {
                const int idx = static_cast<int>(rng.uniform_int(3)) + 1;
                apply_pauli_index(state, idx, g.target);
            }
        }

        const std::vector<double> probs = state.marginal_probabilities(measured);
        std::vector<double> cumulative(probs.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            cumulative[i] = acc;
        }
        cumulative.back() = std::max(cumulative.back(), 1.0);

        for (std::uint64_t s = 0; s < traj_shots; ++s) {
            const double u = rng.uniform();
            std::uint64_t outcome = static_cast<std::uint64_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                cumulative.begin());
            if (readout) {
                for (std::size_t j = 0; j < measured.size(); ++j) {
                    const ReadoutFlip flip =
                        model_.readout_for(measured[j]);
                    const bool bit = (outcome >> j) & 1;
                    const double p_flip = bit ? flip.p10 : flip.p01;
                    if (p_flip > 0.0 && rng.uniform() < p_flip) {
                        outcome ^= std::uint64_t{1} << j;
                    }
                }
            }
            counts[bits_to_string(outcome, static_cast<int>(measured.size()))]++;
        }
    }
    return counts;
}

Circuit fold_circuit(const Circuit& circuit, int factor) {
    if (factor < 1 || factor % 2 == 0) {
        throw std::invalid_argument("fold_circuit: factor must be odd and positive");
    }
    if (factor == 1) {
        return circuit;
    }
    const std::vector<Gate> forward = circuit.unitary_gates();
    const Circuit inverse = circuit.inverse_unitary();

    Circuit folded(circuit.n_qubits());
    for (const Gate& g : forward) {
        folded.append(g);
    }
    for (int rep = 0; rep < (factor - 1) / 2; ++rep) {
        for (const Gate& g : inverse.gates()) {
            folded.append(g);
        }
        for (const Gate& g : forward) {
            folded.append(g);
        }
    }
    if (circuit.has_measurement()) {
        folded.append(circuit.gates().back());
    }
    return folded;
}

double zne_extrapolate(std::span<const std::pair<double, double>> points, ZneFit fit,
                       bool* fell_back) {
    if (fell_back != nullptr) {
        *fell_back = false;
    }
    if (points.size() < 2) {
        throw std::invalid_argument("zne_extrapolate: need at least two points");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].first == points[j].first) {
                throw std::invalid_argument("zne_extrapolate: duplicate noise factor");
            }
        }
    }

    if (fit == ZneFit::Exponential) {
        const bool positive = points.front().second > 0.0;
        bool same_sign = true;
        for (const auto& [lambda, value] : points) {
            if (value == 0.0 || (value > 0.0) != positive) {
                same_sign = false;
                break;
            }
        }
        if (same_sign) {
            std::vector<std::pair<double, double>> logged;
            logged.reserve(points.size());
            for (const auto& [lambda, value] : points) {
                logged.emplace_back(lambda, std::log(std::abs(value)));
            }
            const double log_intercept = zne_extrapolate(logged, ZneFit::Linear);
            return (positive ? 1.0 : -1.0) * std::exp(log_intercept);
        }
        if (fell_back != nullptr) {
            *fell_back = true;
        }
    }

    // Ordinary least squares a + b*lambda, evaluated at lambda = 0.
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& [lambda, value] : points) {
        sx += lambda;
        sy += value;
        sxx += lambda * lambda;
        sxy += lambda * value;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) {
        throw std::invalid_argument("zne_extrapolate: degenerate fit");
    }
    const double slope = (n * sxy - sx * sy) / denom;
    return (sy - slope * sx) / n;
}

std::vector<Circuit> pauli_twirl(const Circuit& circuit, int n_twirls, Rng& rng) {
    if (n_twirls < 1) {
        throw std::invalid_argument("pauli_twirl: n_twirls must be >= 1");
    }
    for (const Gate& g : circuit.gates()) {
        if (!is_basis_gate(g)) {
            throw std::invalid_argument("pauli_twirl: circuit must be decomposed (offending "
                                        "gate: " +
                                        g.label + ")");
        }
    }

    std::vector<Circuit> twirled;
    twirled.reserve(static_cast<std::size_t>(n_twirls));
    for (int copy = 0; copy < n_twirls; ++copy) {
        Circuit out(circuit.n_qubits());
        for (const Gate& g : circuit.gates()) {
            if (!g.is_two_qubit_entangler()) {
                out.append(g);
                continue;
            }
            const auto& table = twirl_table(g.kind == GateKind::CX);
            const TwirlEntry entry = table[rng.uniform_int(16)];
            if (entry.before_a != 0) {
                out.append(Gate::unitary(
                    pauli_matrices()[static_cast<std::size_t>(entry.before_a)], g.control,
                    std::string("tw_") + kPauliNames[entry.before_a]));
            }
            if (entry.before_b != 0) {
                out.append(Gate::unitary(
                    pauli_matrices()[static_cast<std::size_t>(entry.before_b)], g.target,
                    std::string("tw_") + kPauliNames[entry.before_b]));
            }
            out.append(g);
            // Compensating Paulis; the conjugation sign rides on the first
            // matrix so the copy equals the original exactly.
            Matrix2 ma = pauli_matrices()[static_cast<std::size_t>(entry.after_a)];
            if (entry.sign < 0.0) {
                for (Complex& c : ma) {
                    c = -c;
                }
            }
            if (entry.after_a != 0 || entry.sign < 0.0) {
                out.append(Gate::unitary(ma, g.control,
                                         std::string("tw_") + kPauliNames[entry.after_a]));
            }
            if (entry.after_b != 0) {
                out.append(Gate::unitary(
                    pauli_matrices()[static_cast<std::size_t>(entry.after_b)], g.target,
                    std::string("tw_") + kPauliNames[entry.after_b]));
            }
        }
        twirled.push_back(std::move(out));
    }
    return twirled;
}

std::map<std::string, double> readout_mitigate(const CountsMap& counts,
                                               std::span<const ReadoutFlip> flips) {
    if (counts.empty()) {
        throw std::invalid_argument("readout_mitigate: empty counts");
    }
    const std::size_t n_bits = counts.begin()->first.size();
    if (flips.size() != n_bits) {
        throw std::invalid_argument("readout_mitigate: need one flip pair per measured bit");
    }
    std::uint64_t shots = 0;
    for (const auto& [bits, count] : counts) {
        if (bits.size() != n_bits) {
            throw std::invalid_argument("readout_mitigate: inconsistent bitstring lengths");
        }
        shots += count;
    }

    std::vector<double> probs(std::size_t{1} << n_bits, 0.0);
    for (const auto& [bits, count] : counts) {
        probs[string_to_bits(bits)] = static_cast<double>(count) / static_cast<double>(shots);
    }

    // Apply the 2x2 inverse confusion matrix along each bit axis.
    for (std::size_t j = 0; j < n_bits; ++j) {
        const double p01 = flips[j].p01;
        const double p10 = flips[j].p10;
        const double det = 1.0 - p01 - p10;
        if (std::abs(det) < 1e-12) {
            throw std::invalid_argument("readout_mitigate: singular confusion matrix on bit " +
                                        std::to_string(j));
        }
        // C = [[1-p01, p10], [p01, 1-p10]], columns indexed by true value.
        const double inv00 = (1.0 - p10) / det;
        const double inv01 = -p10 / det;
        const double inv10 = -p01 / det;
        const double inv11 = (1.0 - p01) / det;

        const std::size_t mask = std::size_t{1} << j;
        for (std::size_t b = 0; b < probs.size(); ++b) {
            if (b & mask) {
                continue;
            }
            const double v0 = probs[b];
            const double v1 = probs[b | mask];
            probs[b] = inv00 * v0 + inv01 * v1;
            probs[b | mask] = inv10 * v0 + inv11 * v1;
        }
    }

    std::map<std::string, double> quasi;
    for (std::size_t b = 0; b < probs.size(); ++b) {
        if (probs[b] != 0.0) {
            quasi.emplace(bits_to_string(b, static_cast<int>(n_bits)), probs[b]);
        }
    }
    return quasi;
}

std::vector<double> apply_confusion(std::span<const double> probs,
                                    std::span<const ReadoutFlip> flips) {
    if (!std::has_single_bit(probs.size())) {
        throw std::invalid_argument("apply_confusion: outcome count must be a power of two");
    }
    const std::size_t n_bits = static_cast<std::size_t>(std::countr_zero(probs.size()));
    if (flips.size() != n_bits) {
        throw std::invalid_argument("apply_confusion: need one flip pair per bit");
    }
    std::vector<double> out(probs.begin(), probs.end());
    for (std::size_t j = 0; j < n_bits; ++j) {
        const double p01 = flips[j].p01;
        const double p10 = flips[j].p10;
        const std::size_t mask = std::size_t{1} << j;
        for (std::size_t b = 0; b < out.size(); ++b) {
            if (b & mask) {
                continue;
            }
            const double v0 = out[b];
            const double v1 = out[b | mask];
            out[b] = (1.0 - p01) * v0 + p10 * v1;
            out[b | mask] = p01 * v0 + (1.0 - p10) * v1;
        }
    }
    return out;
}

void MitigationConfig::validate() const {
    if (zne_factors.empty() || zne_factors.front() != 1) {
        throw std::invalid_argument("MitigationConfig: zne_factors must start at 1");
    }
    for (std::size_t i = 0; i < zne_factors.size(); ++i) {
        if (zne_factors[i] < 1 || zne_factors[i] % 2 == 0) {
            throw std::invalid_argument("MitigationConfig: zne_factors must be odd");
        }
        if (i > 0 && zne_factors[i] <= zne_factors[i - 1]) {
            throw std::invalid_argument("MitigationConfig: zne_factors must be strictly "
                                        "increasing");
        }
    }
    if (pauli_twirls < 1) {
        throw std::invalid_argument("MitigationConfig: pauli_twirls must be >= 1");
    }
}

std::string MitigationConfig::label() const {
    std::ostringstream os;
    os << "zne[";
    for (std::size_t i = 0; i < zne_factors.size(); ++i) {
        os << (i ? "," : "") << zne_factors[i];
    }
    os << "]-" << (zne_fit == ZneFit::Linear ? "linear" : "exp");
    os << "+pt" << pauli_twirls;
    if (readout_mitigation) {
        os << "+ro";
    }
    return os.str();
}

} // namespace syksim
