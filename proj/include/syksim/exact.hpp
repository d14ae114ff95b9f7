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

#include <span>

#include <Eigen/Dense>

#include "syksim/pauli.hpp"
#include "syksim/statevector.hpp"
#include "syksim/syk.hpp"

namespace syksim {

/// Dense 2^n x 2^n matrix of the Pauli operator, built directly from the
/// per-qubit letters (independent of the symplectic product rules).
Eigen::MatrixXcd pauli_to_matrix(const PauliString& p);

/// Dense Hamiltonian sum a_n * matrix(P_n).
Eigen::MatrixXcd hamiltonian_to_matrix(const SykHamiltonian& h);

/// Reduced state of a small subsystem. Validated on construction:
/// Hermitian and unit trace within 1e-10, eigenvalues >= -1e-10.
class DensityMatrix {
  public:
    DensityMatrix(int n_qubits, Eigen::MatrixXcd matrix);

    int n_qubits() const { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    /// Eigenvalues clipped to [0, inf), ascending.
    Eigen::VectorXd eigenvalues() const;

  private:
    int n_qubits_;
    Eigen::MatrixXcd matrix_;
};

/// e^{-iHt} |psi> via dense eigendecomposition. Dimension capped at 2^12.
Statevector exact_evolve(const SykHamiltonian& h, const Statevector& state, double t);

/// Partial trace over the complement of `keep`. Row/column index bit j of
/// the result corresponds to qubit keep[j].
DensityMatrix reduced_density_matrix(const Statevector& state, std::span<const int> keep);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

/// (1 / (1 - n)) log Tr rho^n, natural log.
double renyi_entropy(const DensityMatrix& rho, int n = 2);

/// -sum lambda log lambda with 0 log 0 = 0, natural log.
double von_neumann_entropy(const DensityMatrix& rho);

/// Exact subsystem Renyi-2 entropy of a pure state.
double exact_renyi2(const Statevector& state, std::span<const int> keep);

} // namespace syksim
