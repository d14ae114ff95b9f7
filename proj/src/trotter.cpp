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

#include "syksim/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "syksim/exact.hpp"

namespace syksim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void append_term_decomposed(Circuit& circuit, const PauliString& p, double theta) {
    std::vector<int> support;
    for (int q = 0; q < p.n_qubits(); ++q) {
        if (p.letter(q) != 'I') {
            support.push_back(q);
        }
    }
    if (support.empty()) {
        return;
    }

    // Basis change into Z on every support qubit: X -> H, Y -> Sdg then H.
    for (int q : support) {
        const char letter = p.letter(q);
        if (letter == 'X') {
            circuit.append(Gate::hadamard(q));
        } else if (letter == 'Y') {
            circuit.append(Gate::unitary(kSdgGate, q, "sdg"));
            circuit.append(Gate::hadamard(q));
        }
    }
    for (std::size_t j = 0; j + 1 < support.size(); ++j) {
        circuit.append(Gate::cx(support[j], support[j + 1]));
    }
    circuit.append(Gate::unitary(rz_matrix(2.0 * theta), support.back(), "rz"));
    for (std::size_t j = support.size() - 1; j-- > 0;) {
        circuit.append(Gate::cx(support[j], support[j + 1]));
    }
    for (int q : support) {
        const char letter = p.letter(q);
        if (letter == 'X') {
            circuit.append(Gate::hadamard(q));
        } else if (letter == 'Y') {
            circuit.append(Gate::hadamard(q));
            circuit.append(Gate::unitary(kSGate, q, "s"));
        }
    }
}

} // namespace

const Matrix2 kSGate{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{0, 1}};
const Matrix2 kSdgGate{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{0, -1}};
const Matrix2 kTGate{Complex{1, 0}, Complex{0, 0}, Complex{0, 0},
                     Complex{kInvSqrt2, kInvSqrt2}};
const Matrix2 kTdgGate{Complex{1, 0}, Complex{0, 0}, Complex{0, 0},
                       Complex{kInvSqrt2, -kInvSqrt2}};
const Matrix2 kHGate{Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                     Complex{-kInvSqrt2, 0}};

Matrix2 rz_matrix(double phi) {
    return Matrix2{Complex{std::cos(phi / 2), -std::sin(phi / 2)}, Complex{0, 0}, Complex{0, 0},
                   Complex{std::cos(phi / 2), std::sin(phi / 2)}};
}

TrotterPlan TrotterPlan::make(SykHamiltonian h, double t, int r) {
    TrotterPlan plan;
    plan.term_order.resize(h.terms.size());
    std::iota(plan.term_order.begin(), plan.term_order.end(), 0);
    plan.hamiltonian = std::move(h);
    plan.t = t;
    plan.r = r;
    plan.validate();
    return plan;
}

void TrotterPlan::validate() const {
    if (r < 1) {
        throw std::invalid_argument("TrotterPlan: step count must be >= 1");
    }
    if (!std::isfinite(t) || !std::isfinite(dt())) {
        throw std::invalid_argument("TrotterPlan: non-finite time step");
    }
    if (term_order.size() != hamiltonian.terms.size()) {
        throw std::invalid_argument("TrotterPlan: term_order length mismatch");
    }
    std::vector<bool> seen(term_order.size(), false);
    for (int idx : term_order) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= term_order.size() ||
            seen[static_cast<std::size_t>(idx)]) {
            throw std::invalid_argument("TrotterPlan: term_order is not a permutation");
        }
        seen[static_cast<std::size_t>(idx)] = true;
    }
}

Circuit build_trotter_circuit(const TrotterPlan& plan, bool decomposed) {
    plan.validate();
    const double dt = plan.dt();
    Circuit circuit(plan.hamiltonian.n_qubits);
    for (int step = 0; step < plan.r; ++step) {
        for (int idx : plan.term_order) {
            const SykTerm& term = plan.hamiltonian.terms[static_cast<std::size_t>(idx)];
            const double theta = term.coefficient * dt;
            if (term.op.weight() == 0) {
                continue;
            }
            if (decomposed) {
                append_term_decomposed(circuit, term.op, theta);
            } else {
                circuit.append(Gate::pauli_rotation(term.op, theta));
            }
        }
    }
    return circuit;
}

GateCountReport count_gates(const Circuit& circuit) {
    GateCountReport report;
    std::vector<int> qubit_depth(static_cast<std::size_t>(circuit.n_qubits()), 0);
    for (const Gate& g : circuit.gates()) {
        if (g.is_measurement()) {
            continue;
        }
        switch (g.kind) {
        case GateKind::SingleQubitUnitary:
        case GateKind::Hadamard:
            report.single_qubit_gates++;
            break;
        case GateKind::CX:
        case GateKind::CZ:
            report.two_qubit_gates++;
            break;
        default:
            report.other_gates++;
            break;
        }
        int level = 0;
        for (int q : g.qubits()) {
            level = std::max(level, qubit_depth[static_cast<std::size_t>(q)]);
        }
        ++level;
        for (int q : g.qubits()) {
            qubit_depth[static_cast<std::size_t>(q)] = level;
        }
        report.depth = std::max(report.depth, level);
    }
    report.per_step_depth = report.depth;
    return report;
}

GateCountReport trotter_gate_report(const TrotterPlan& plan) {
    GateCountReport report = count_gates(build_trotter_circuit(plan, true));
    TrotterPlan single = plan;
    single.r = 1;
    single.t = plan.dt();
    report.per_step_depth = count_gates(build_trotter_circuit(single, true)).depth;
    return report;
}

double trotter_error(const TrotterPlan& plan, const Statevector& initial) {
    Statevector trotterized = initial;
    build_trotter_circuit(plan, false).apply_to(trotterized);
    const Statevector exact = exact_evolve(plan.hamiltonian, initial, plan.t);

    double sum = 0.0;
    for (std::size_t i = 0; i < trotterized.dimension(); ++i) {
        sum += std::norm(trotterized.amplitude(i) - exact.amplitude(i));
    }
    return std::sqrt(sum);
}

} // namespace syksim
