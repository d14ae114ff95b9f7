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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "syksim/pauli.hpp"
#include "syksim/statevector.hpp"

namespace syksim {

enum class GateKind {
    SingleQubitUnitary,
    Hadamard,
    CX,
    CZ,
    ControlledSwap,
    PauliRotation,
    Measurement,
};

/// One circuit instruction. Use the factory functions; they fill in only the
/// fields their kind reads.
struct Gate {
    GateKind kind = GateKind::Hadamard;
    int target = -1;   // single-qubit target; CX/CZ target; cswap first swapped qubit
    int control = -1;  // CX/CZ/cswap control
    int target2 = -1;  // cswap second swapped qubit
    Matrix2 matrix{};  // SingleQubitUnitary only
    PauliString pauli = PauliString(1);
    double angle = 0.0;
    std::vector<int> targets; // Measurement only
    std::string label;

    static Gate unitary(const Matrix2& m, int target, std::string label = "u");
    static Gate hadamard(int target);
    static Gate cx(int control, int target);
    static Gate cz(int a, int b);
    static Gate cswap(int control, int a, int b);
    static Gate pauli_rotation(PauliString p, double angle);
    static Gate measure(std::vector<int> targets);

    /// Qubits the gate touches, in declaration order.
    std::vector<int> qubits() const;

    /// Inverse of a unitary gate; throws for measurements.
    Gate inverse() const;

    bool is_two_qubit_entangler() const { return kind == GateKind::CX || kind == GateKind::CZ; }
    bool is_measurement() const { return kind == GateKind::Measurement; }

    bool operator==(const Gate& other) const = default;
};

/// Checks the matrix is unitary within 1e-12; throws otherwise.
void check_unitary(const Matrix2& m);

/// Ordered gate list on a fixed register. Measurements are terminal only:
/// at most one Measurement gate, and nothing may follow it.
class Circuit {
  public:
    explicit Circuit(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }

    /// Validates qubit ranges, distinctness, unitarity and the
    /// terminal-measurement rule, then appends.
    void append(Gate gate);

    bool has_measurement() const { return has_measurement_; }
    const std::vector<int>& measured_qubits() const;
    int classical_bits() const;

    /// The unitary portion (everything before the measurement).
    std::vector<Gate> unitary_gates() const;

    /// Reversed, gate-inverted copy of the unitary portion; no measurement.
    Circuit inverse_unitary() const;

    /// Applies the unitary portion to the state in order.
    void apply_to(Statevector& state) const;

    /// Applies all gates to |0...0> and returns the final state.
    Statevector final_state() const;

    bool operator==(const Circuit& other) const = default;

  private:
    int n_qubits_;
    std::vector<Gate> gates_;
    bool has_measurement_ = false;
};

/// Applies one unitary gate to the state.
void apply_gate(Statevector& state, const Gate& gate);

/// Applies all gates to |0...0>, then samples the terminal measurement.
/// Throws if the circuit has no measurement.
CountsMap run_circuit(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed);

/// Exact outcome distribution of the terminal measurement.
std::vector<double> exact_probabilities(const Circuit& circuit);

/// JSON round-trip for circuits (gate list with kind, operands, parameters).
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

} // namespace syksim
