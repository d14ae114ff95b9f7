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

#include "syksim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

namespace syksim {

using json = nlohmann::json;

Gate Gate::unitary(const Matrix2& m, int target, std::string label) {
    check_unitary(m);
    Gate g;
    g.kind = GateKind::SingleQubitUnitary;
    g.matrix = m;
    g.target = target;
    g.label = std::move(label);
    return g;
}

Gate Gate::hadamard(int target) {
    Gate g;
    g.kind = GateKind::Hadamard;
    g.target = target;
    g.label = "h";
    return g;
}

Gate Gate::cx(int control, int target) {
    Gate g;
    g.kind = GateKind::CX;
    g.control = control;
    g.target = target;
    g.label = "cx";
    return g;
}

Gate Gate::cz(int a, int b) {
    Gate g;
    g.kind = GateKind::CZ;
    g.control = a;
    g.target = b;
    g.label = "cz";
    return g;
}

Gate Gate::cswap(int control, int a, int b) {
    Gate g;
    g.kind = GateKind::ControlledSwap;
    g.control = control;
    g.target = a;
    g.target2 = b;
    g.label = "cswap";
    return g;
}

Gate Gate::pauli_rotation(PauliString p, double angle) {
    Gate g;
    g.kind = GateKind::PauliRotation;
    g.pauli = std::move(p);
    g.angle = angle;
    g.label = "rot";
    return g;
}

Gate Gate::measure(std::vector<int> targets) {
    Gate g;
    g.kind = GateKind::Measurement;
    g.targets = std::move(targets);
    g.label = "measure";
    return g;
}

std::vector<int> Gate::qubits() const {
    switch (kind) {
    case GateKind::SingleQubitUnitary:
    case GateKind::Hadamard:
        return {target};
    case GateKind::CX:
    case GateKind::CZ:
        return {control, target};
    case GateKind::ControlledSwap:
        return {control, target, target2};
    case GateKind::PauliRotation: {
        std::vector<int> qs;
        for (int q = 0; q < pauli.n_qubits(); ++q) {
            if (pauli.letter(q) != 'I') {
                qs.push_back(q);
            }
        }
        return qs;
    }
    case GateKind::Measurement:
        return targets;
    }
    return {};
}

Gate Gate::inverse() const {
    switch (kind) {
    case GateKind::SingleQubitUnitary: {
        // Conjugate transpose.
        Matrix2 inv{std::conj(matrix[0]), std::conj(matrix[2]), std::conj(matrix[1]),
                    std::conj(matrix[3])};
        return Gate::unitary(inv, target, label + "_dg");
    }
    case GateKind::Hadamard:
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::ControlledSwap:
        return *this; // self-inverse
    case GateKind::PauliRotation:
        return Gate::pauli_rotation(pauli, -angle);
    case GateKind::Measurement:
        throw std::invalid_argument("Gate::inverse: measurements are not invertible");
    }
    throw std::logic_error("Gate::inverse: unknown kind");
}

void check_unitary(const Matrix2& m) {
    // Columns orthonormal within 1e-12.
    const double c0 = std::norm(m[0]) + std::norm(m[2]);
    const double c1 = std::norm(m[1]) + std::norm(m[3]);
    const Complex dot = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    if (std::abs(c0 - 1.0) > 1e-12 || std::abs(c1 - 1.0) > 1e-12 || std::abs(dot) > 1e-12) {
        throw std::invalid_argument("check_unitary: matrix is not unitary within 1e-12");
    }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) {
        throw std::invalid_argument("Circuit: qubit count must be positive");
    }
}

void Circuit::append(Gate gate) {
    if (has_measurement_) {
        throw std::invalid_argument("Circuit: cannot append after a measurement");
    }
    const std::vector<int> qs = gate.qubits();
    if (qs.empty()) {
        throw std::invalid_argument("Circuit: gate touches no qubits");
    }
    std::set<int> seen;
    for (int q : qs) {
        if (q < 0 || q >= n_qubits_) {
            throw std::out_of_range("Circuit: qubit " + std::to_string(q) +
                                    " out of range for " + std::to_string(n_qubits_) +
                                    " qubits");
        }
        if (!seen.insert(q).second) {
            throw std::invalid_argument("Circuit: gate operands must be distinct");
        }
    }
    if (gate.kind == GateKind::PauliRotation && gate.pauli.n_qubits() != n_qubits_) {
        throw std::invalid_argument("Circuit: rotation Pauli width mismatch");
    }
    if (gate.kind == GateKind::Measurement) {
        has_measurement_ = true;
    }
    gates_.push_back(std::move(gate));
}

const std::vector<int>& Circuit::measured_qubits() const {
    static const std::vector<int> kEmpty;
    if (!has_measurement_) {
        return kEmpty;
    }
    return gates_.back().targets;
}

int Circuit::classical_bits() const { return static_cast<int>(measured_qubits().size()); }

std::vector<Gate> Circuit::unitary_gates() const {
    std::vector<Gate> gs;
    gs.reserve(gates_.size());
    for (const Gate& g : gates_) {
        if (!g.is_measurement()) {
            gs.push_back(g);
        }
    }
    return gs;
}

Circuit Circuit::inverse_unitary() const {
    Circuit inv(n_qubits_);
    const std::vector<Gate> gs = unitary_gates();
    for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
        inv.append(it->inverse());
    }
    return inv;
}

void Circuit::apply_to(Statevector& state) const {
    if (state.n_qubits() != n_qubits_) {
        throw std::invalid_argument("Circuit::apply_to: state width mismatch");
    }
    for (const Gate& g : gates_) {
        if (!g.is_measurement()) {
            apply_gate(state, g);
        }
    }
}

Statevector Circuit::final_state() const {
    Statevector state(n_qubits_);
    apply_to(state);
    return state;
}

void apply_gate(Statevector& state, const Gate& gate) {
    switch (gate.kind) {
    case GateKind::SingleQubitUnitary:
        state.apply_single_qubit(gate.matrix, gate.target);
        return;
    case GateKind::Hadamard:
        state.apply_hadamard(gate.target);
        return;
    case GateKind::CX:
        state.apply_cx(gate.control, gate.target);
        return;
    case GateKind::CZ:
        state.apply_cz(gate.control, gate.target);
        return;
    case GateKind::ControlledSwap:
        state.apply_cswap(gate.control, gate.target, gate.target2);
        return;
    case GateKind::PauliRotation:
        state.apply_pauli_rotation(gate.pauli, gate.angle);
        return;
    case GateKind::Measurement:
        throw std::invalid_argument("apply_gate: measurement is not a unitary gate");
    }
}

CountsMap run_circuit(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed) {
    if (!circuit.has_measurement()) {
        throw std::invalid_argument("run_circuit: circuit has no measurement");
    }
    const Statevector state = circuit.final_state();
    return sample_counts(state, circuit.measured_qubits(), shots, seed);
}

std::vector<double> exact_probabilities(const Circuit& circuit) {
    if (!circuit.has_measurement()) {
        throw std::invalid_argument("exact_probabilities: circuit has no measurement");
    }
    const Statevector state = circuit.final_state();
    return state.marginal_probabilities(circuit.measured_qubits());
}

namespace {

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) { return Complex{j.at(0).get<double>(), j.at(1).get<double>()}; }

json gate_to_json(const Gate& g) {
    json j;
    j["label"] = g.label;
    switch (g.kind) {
    case GateKind::SingleQubitUnitary:
        j["kind"] = "unitary";
        j["target"] = g.target;
        j["matrix"] = json::array({complex_to_json(g.matrix[0]), complex_to_json(g.matrix[1]),
                                   complex_to_json(g.matrix[2]), complex_to_json(g.matrix[3])});
        break;
    case GateKind::Hadamard:
        j["kind"] = "h";
        j["target"] = g.target;
        break;
    case GateKind::CX:
        j["kind"] = "cx";
        j["control"] = g.control;
        j["target"] = g.target;
        break;
    case GateKind::CZ:
        j["kind"] = "cz";
        j["control"] = g.control;
        j["target"] = g.target;
        break;
    case GateKind::ControlledSwap:
        j["kind"] = "cswap";
        j["control"] = g.control;
        j["target"] = g.target;
        j["target2"] = g.target2;
        break;
    case GateKind::PauliRotation:
        j["kind"] = "rotation";
        j["pauli"] = g.pauli.str();
        j["angle"] = g.angle;
        break;
    case GateKind::Measurement:
        j["kind"] = "measure";
        j["targets"] = g.targets;
        break;
    }
    return j;
}

Gate gate_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    Gate g;
    if (kind == "unitary") {
        Matrix2 m;
        for (int i = 0; i < 4; ++i) {
            m[static_cast<std::size_t>(i)] = complex_from_json(j.at("matrix").at(i));
        }
        g = Gate::unitary(m, j.at("target").get<int>());
    } else if (kind == "h") {
        g = Gate::hadamard(j.at("target").get<int>());
    } else if (kind == "cx") {
        g = Gate::cx(j.at("control").get<int>(), j.at("target").get<int>());
    } else if (kind == "cz") {
        g = Gate::cz(j.at("control").get<int>(), j.at("target").get<int>());
    } else if (kind == "cswap") {
        g = Gate::cswap(j.at("control").get<int>(), j.at("target").get<int>(),
                        j.at("target2").get<int>());
    } else if (kind == "rotation") {
        g = Gate::pauli_rotation(PauliString::from_text(j.at("pauli").get<std::string>()),
                                 j.at("angle").get<double>());
    } else if (kind == "measure") {
        g = Gate::measure(j.at("targets").get<std::vector<int>>());
    } else {
        throw std::invalid_argument("gate_from_json: unknown kind \"" + kind + "\"");
    }
    if (j.contains("label")) {
        g.label = j.at("label").get<std::string>();
    }
    return g;
}

} // namespace

std::string circuit_to_json(const Circuit& circuit) {
    json j;
    j["n_qubits"] = circuit.n_qubits();
    j["classical_bits"] = circuit.classical_bits();
    json gates = json::array();
    for (const Gate& g : circuit.gates()) {
        gates.push_back(gate_to_json(g));
    }
    j["gates"] = std::move(gates);
    return j.dump();
}

Circuit circuit_from_json(const std::string& text) {
    const json j = json::parse(text);
    Circuit circuit(j.at("n_qubits").get<int>());
    for (const json& jg : j.at("gates")) {
        circuit.append(gate_from_json(jg));
    }
    return circuit;
}

} // namespace syksim
