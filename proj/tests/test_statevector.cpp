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

#include <doctest.h>

#include <cmath>

#include "syksim/circuit.hpp"
#include "syksim/exact.hpp"
#include "syksim/statevector.hpp"

#include "oracle_util.hpp"

using namespace syksim;

namespace {

Circuit random_unitary_circuit(int n_qubits, int n_gates, Rng& rng) {
    Circuit circuit(n_qubits);
    for (int i = 0; i < n_gates; ++i) {
        switch (rng.uniform_int(5)) {
        case 0:
            circuit.append(Gate::hadamard(static_cast<int>(rng.uniform_int(n_qubits))));
            break;
        case 1: {
            const int a = static_cast<int>(rng.uniform_int(n_qubits));
            int b = static_cast<int>(rng.uniform_int(n_qubits - 1));
            if (b >= a) {
                ++b;
            }
            circuit.append(Gate::cx(a, b));
            break;
        }
        case 2: {
            const int a = static_cast<int>(rng.uniform_int(n_qubits));
            int b = static_cast<int>(rng.uniform_int(n_qubits - 1));
            if (b >= a) {
                ++b;
            }
            circuit.append(Gate::cz(a, b));
            break;
        }
        case 3: {
            // Random single-qubit unitary from two Gaussian columns.
            Complex a{rng.gaussian(), rng.gaussian()};
            Complex c{rng.gaussian(), rng.gaussian()};
            const double n1 = std::sqrt(std::norm(a) + std::norm(c));
            a /= n1;
            c /= n1;
            Complex b{rng.gaussian(), rng.gaussian()};
            Complex d{rng.gaussian(), rng.gaussian()};
            const Complex overlap = std::conj(a) * b + std::conj(c) * d;
            b -= overlap * a;
            d -= overlap * c;
            const double n2 = std::sqrt(std::norm(b) + std::norm(d));
            circuit.append(Gate::unitary(Matrix2{a, b / n2, c, d / n2},
                                         static_cast<int>(rng.uniform_int(n_qubits))));
            break;
        }
        default: {
            PauliString p = testing::random_pauli(n_qubits, rng, true).with_phase_exponent(0);
            if (p.weight() == 0) {
                p = PauliString(n_qubits, 0, 1, 0);
            }
            circuit.append(Gate::pauli_rotation(p, rng.uniform() * 2.0 - 1.0));
            break;
        }
        }
    }
    return circuit;
}

} // namespace

TEST_CASE("hadamard on |0>") {
    Statevector state(1);
    state.apply_hadamard(0);
    CHECK(std::abs(state.amplitude(0) - Complex{M_SQRT1_2, 0}) < 1e-15);
    CHECK(std::abs(state.amplitude(1) - Complex{M_SQRT1_2, 0}) < 1e-15);
}

TEST_CASE("identity unitary leaves amplitudes bit-exact") {
    Rng rng(5);
    Statevector state = testing::random_state(3, rng);
    const std::vector<Complex> before = state.amplitudes();
    state.apply_single_qubit(
        Matrix2{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}}, 1);
    CHECK(state.amplitudes() == before);
}

TEST_CASE("CZ on |++> leaves a half-pure marginal") {
    Statevector state(2);
    state.apply_hadamard(0);
    state.apply_hadamard(1);
    state.apply_cz(0, 1);
    const std::vector<int> keep{0};
    const double p = purity(reduced_density_matrix(state, keep));
    CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pauli rotation basics") {
    Statevector state(1);
    state.apply_pauli_rotation(PauliString::from_text("+X"), 0.0);
    CHECK(std::abs(state.amplitude(0) - Complex{1, 0}) < 1e-15);

    // exp(-i (pi/2) X)|0> = -i |1>.
    state.apply_pauli_rotation(PauliString::from_text("+X"), M_PI_2);
    CHECK(std::abs(state.amplitude(0)) < 1e-15);
    CHECK(std::abs(state.amplitude(1) - Complex{0, -1}) < 1e-15);
}

TEST_CASE("ZZ rotation phases |00> by exp(-i theta)") {
    const double theta = 0.37;
    Statevector state(2);
    state.apply_pauli_rotation(PauliString::from_text("+ZZ"), theta);
    CHECK(std::abs(state.amplitude(0) - Complex{std::cos(theta), -std::sin(theta)}) < 1e-14);

    // Same operator through the dense exponential oracle on a random state.
    Rng rng(9);
    Statevector psi = testing::random_state(2, rng);
    const Gate rotation = Gate::pauli_rotation(PauliString::from_text("+ZZ"), theta);
    const Eigen::VectorXcd expected =
        testing::gate_to_dense(rotation, 2) * testing::to_eigen(psi);
    psi.apply_pauli_rotation(PauliString::from_text("+ZZ"), theta);
    CHECK((testing::to_eigen(psi) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rotation followed by its inverse restores the state") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const PauliString p = testing::random_pauli(4, rng, true).with_phase_exponent(0);
        const double theta = 2.0 * rng.uniform() - 1.0;
        Statevector state = testing::random_state(4, rng);
        const Statevector original = state;
        state.apply_pauli_rotation(p, theta);
        state.apply_pauli_rotation(p, -theta);
        CHECK(testing::max_amplitude_distance(state, original) < 1e-10);
    }
}

TEST_CASE("apply_pauli matches the dense Pauli matrix") {
    Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const PauliString p = testing::random_pauli(3, rng);
        Statevector state = testing::random_state(3, rng);
        const Eigen::VectorXcd expected = pauli_to_matrix(p) * testing::to_eigen(state);
        state.apply_pauli(p);
        CHECK((testing::to_eigen(state) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("gate kernels match the dense oracle on random circuits") {
    Rng rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(3)); // 2..4 qubits
        const Circuit circuit = random_unitary_circuit(n, 12, rng);
        Statevector state = testing::random_state(n, rng);
        const Eigen::VectorXcd expected =
            testing::circuit_to_dense(circuit) * testing::to_eigen(state);
        circuit.apply_to(state);
        CHECK((testing::to_eigen(state) - expected).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(state.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("controlled swap acts on basis states") {
    Statevector state(3);
    // Prepare |110> (qubit0=0, qubit1=1, ancilla=1 at qubit2).
    state.apply_single_qubit(Matrix2{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}},
                             1);
    state.apply_single_qubit(Matrix2{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}},
                             2);
    state.apply_cswap(2, 0, 1);
    // Swap moved the 1 from qubit1 to qubit0: |101> = index 5.
    CHECK(std::abs(state.amplitude(0b101) - Complex{1, 0}) < 1e-15);
}

TEST_CASE("norm is preserved by long random sequences") {
    Rng rng(31);
    const Circuit circuit = random_unitary_circuit(4, 200, rng);
    Statevector state(4);
    circuit.apply_to(state);
    CHECK(std::abs(state.norm() - 1.0) < 1e-10);
}

TEST_CASE("sampling determinism and trivial distributions") {
    Statevector zero(2);
    const std::vector<int> all{0, 1};
    const CountsMap counts = sample_counts(zero, all, 100, 7);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at("00") == 100);

    Statevector plus(1);
    plus.apply_hadamard(0);
    const std::vector<int> q0{0};
    const CountsMap big = sample_counts(plus, q0, 1000000, 42);
    // Binomial: 3 sigma = 1500 around 500k.
    CHECK(std::abs(static_cast<double>(big.at("0")) - 500000.0) < 1500.0);

    CHECK(sample_counts(plus, q0, 5000, 9) == sample_counts(plus, q0, 5000, 9));
    CHECK(sample_counts(plus, q0, 5000, 9) != sample_counts(plus, q0, 5000, 10));
}

TEST_CASE("bell state only yields 00 and 11") {
    Circuit circuit(2);
    circuit.append(Gate::hadamard(0));
    circuit.append(Gate::cx(0, 1));
    circuit.append(Gate::measure({0, 1}));
    const CountsMap counts = run_circuit(circuit, 20000, 3);
    std::uint64_t total = 0;
    for (const auto& [bits, count] : counts) {
        CHECK((bits == "00" || bits == "11"));
        total += count;
    }
    CHECK(total == 20000);
}

TEST_CASE("empty circuit measures all zeros") {
    Circuit circuit(3);
    circuit.append(Gate::measure({0, 1, 2}));
    const CountsMap counts = run_circuit(circuit, 50, 1);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at("000") == 50);
}

TEST_CASE("measurement is terminal") {
    Circuit circuit(2);
    circuit.append(Gate::measure({0}));
    CHECK_THROWS_AS(circuit.append(Gate::hadamard(1)), std::invalid_argument);
}

TEST_CASE("gate validation") {
    Circuit circuit(2);
    CHECK_THROWS_AS(circuit.append(Gate::hadamard(2)), std::out_of_range);
    CHECK_THROWS_AS(circuit.append(Gate::cx(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(Gate::unitary(Matrix2{Complex{1, 0}, Complex{1, 0}, Complex{0, 0},
                                          Complex{1, 0}},
                                  0),
                    std::invalid_argument);
    Statevector state(2);
    CHECK_THROWS_AS(state.apply_pauli_rotation(PauliString::from_text("+iXX"), 0.5),
                    std::invalid_argument);
}

TEST_CASE("marginal probabilities pick the right qubits") {
    Statevector state(2);
    // |01>: qubit 0 = 1, qubit 1 = 0.
    state.apply_single_qubit(Matrix2{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}},
                             0);
    const std::vector<int> q0{0};
    const std::vector<int> q1{1};
    CHECK(state.marginal_probabilities(q0)[1] == doctest::Approx(1.0));
    CHECK(state.marginal_probabilities(q1)[0] == doctest::Approx(1.0));

    const std::vector<int> dup{0, 0};
    CHECK_THROWS_AS(state.marginal_probabilities(dup), std::invalid_argument);
    const std::vector<int> empty;
    CHECK_THROWS_AS(state.marginal_probabilities(empty), std::invalid_argument);
}

TEST_CASE("circuit JSON round-trip") {
    Rng rng(43);
    Circuit circuit = random_unitary_circuit(3, 10, rng);
    circuit.append(Gate::cswap(0, 1, 2));
    circuit.append(Gate::measure({0, 2}));
    const Circuit reloaded = circuit_from_json(circuit_to_json(circuit));
    REQUIRE(reloaded.gates().size() == circuit.gates().size());
    CHECK(reloaded == circuit);
}
