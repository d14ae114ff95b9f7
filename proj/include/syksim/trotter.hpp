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

#include <vector>

#include "syksim/circuit.hpp"
#include "syksim/syk.hpp"

namespace syksim {

/// First-order product-formula plan: (prod_n exp(-i a_n P_n t/r))^r with the
/// factors taken in term_order within each step.
struct TrotterPlan {
    SykHamiltonian hamiltonian;
    double t = 0.0;
    int r = 1;
    std::vector<int> term_order;

    /// Plan with the default lexicographic term order.
    static TrotterPlan make(SykHamiltonian h, double t, int r);

    double dt() const { return t / r; }
    void validate() const;
};

/// Gate accounting for a Trotter circuit. Depth is the longest qubit-wise
/// dependency chain counting every gate (single-qubit gates included);
/// measurements are excluded from both depth and counts. `other_gates`
/// covers native multi-qubit rotations and controlled swaps.
struct GateCountReport {
    int depth = 0;
    int two_qubit_gates = 0;
    int single_qubit_gates = 0;
    int other_gates = 0;
    int per_step_depth = 0;
};

/// Builds the Trotter circuit. With decomposed=false each factor is a native
/// Pauli rotation; with decomposed=true each weight-w factor expands into
/// single-qubit basis changes (H for X, Sdg/H for Y), a CX ladder of 2(w-1)
/// gates and one Rz. Identity terms contribute only a global phase and are
/// skipped in both modes.
Circuit build_trotter_circuit(const TrotterPlan& plan, bool decomposed);

/// Counts one circuit; per_step_depth is set to the full depth.
GateCountReport count_gates(const Circuit& circuit);

/// Counts the decomposed circuit for the plan and fills per_step_depth from
/// a single-step build.
GateCountReport trotter_gate_report(const TrotterPlan& plan);

/// 2-norm distance between the Trotterized final state and exact evolution,
/// starting from `initial`.
double trotter_error(const TrotterPlan& plan, const Statevector& initial);

/// Rz(phi) = exp(-i phi Z / 2).
Matrix2 rz_matrix(double phi);

extern const Matrix2 kSGate;
extern const Matrix2 kSdgGate;
extern const Matrix2 kTGate;
extern const Matrix2 kTdgGate;
extern const Matrix2 kHGate;

} // namespace syksim
