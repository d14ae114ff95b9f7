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

#include "syksim/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace syksim {

namespace {

constexpr double kValidationTol = 1e-10;
constexpr int kMaxDenseQubits = 12;

Eigen::Matrix2cd letter_matrix(char letter) {
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (letter) {
    case 'I':
        m << 1, 0, 0, 1;
        break;
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, -i, i, 0;
        break;
    default:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

} // namespace

Eigen::MatrixXcd pauli_to_matrix(const PauliString& p) {
    if (p.n_qubits() > kMaxDenseQubits) {
        throw std::invalid_argument("pauli_to_matrix: dimension too large");
    }
    const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1) * p.phase();
    // Qubit 0 owns the least significant index bit, so it is the *rightmost*
    // Kronecker factor: matrix(P) = letter(n-1) kron ... kron letter(0).
    for (int q = 0; q < p.n_qubits(); ++q) {
        const Eigen::Matrix2cd factor = letter_matrix(p.letter(q));
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) = factor(r, c) * m;
            }
        }
        m = std::move(next);
    }
    if (m.rows() != dim) {
        throw std::logic_error("pauli_to_matrix: dimension bookkeeping error");
    }
    return m;
}

Eigen::MatrixXcd hamiltonian_to_matrix(const SykHamiltonian& h) {
    const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const SykTerm& term : h.terms) {
        m += term.coefficient * pauli_to_matrix(term.op);
    }
    return m;
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw std::invalid_argument("DensityMatrix: shape does not match qubit count");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kValidationTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace().real() - 1.0) > kValidationTol ||
        std::abs(matrix_.trace().imag()) > kValidationTol) {
        throw std::invalid_argument("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_,
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kValidationTol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
    }
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseMax(0.0);
}

Statevector exact_evolve(const SykHamiltonian& h, const Statevector& state, double t) {
    if (h.n_qubits != state.n_qubits()) {
        throw std::invalid_argument("exact_evolve: qubit count mismatch");
    }
    if (h.n_qubits > kMaxDenseQubits) {
        throw std::invalid_argument("exact_evolve: dimension too large for dense "
                                    "diagonalization");
    }
    const Eigen::Index dim = Eigen::Index{1} << h.n_qubits;
    const Eigen::MatrixXcd hm = hamiltonian_to_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hm);

    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        psi(i) = state.amplitude(static_cast<std::size_t>(i));
    }
    Eigen::VectorXcd in_eigenbasis = solver.eigenvectors().adjoint() * psi;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double energy = solver.eigenvalues()(i);
        in_eigenbasis(i) *= Complex{std::cos(energy * t), -std::sin(energy * t)};
    }
    const Eigen::VectorXcd out = solver.eigenvectors() * in_eigenbasis;

    std::vector<Complex> amps(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        amps[static_cast<std::size_t>(i)] = out(i);
    }
    return Statevector::from_amplitudes(std::move(amps));
}

DensityMatrix reduced_density_matrix(const Statevector& state, std::span<const int> keep) {
    const int n = state.n_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("reduced_density_matrix: keep list is empty");
    }
    if (static_cast<int>(keep.size()) >= n) {
        throw std::invalid_argument("reduced_density_matrix: keep must be a proper subset");
    }
    std::uint64_t keep_mask = 0;
    for (int q : keep) {
        if (q < 0 || q >= n) {
            throw std::out_of_range("reduced_density_matrix: qubit out of range");
        }
        if ((keep_mask >> q) & 1) {
            throw std::invalid_argument("reduced_density_matrix: duplicate qubit in keep");
        }
        keep_mask |= std::uint64_t{1} << q;
    }

    const int n_keep = static_cast<int>(keep.size());
    const int n_env = n - n_keep;
    std::vector<int> env;
    env.reserve(static_cast<std::size_t>(n_env));
    for (int q = 0; q < n; ++q) {
        if (((keep_mask >> q) & 1) == 0) {
            env.push_back(q);
        }
    }

    // scatter(a, e) = full basis index with keep bits a and env bits e.
    auto scatter = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t b = 0;
        for (int j = 0; j < n_keep; ++j) {
            b |= ((a >> j) & 1) << keep[static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < n_env; ++j) {
            b |= ((e >> j) & 1) << env[static_cast<std::size_t>(j)];
        }
        return b;
    };

    const Eigen::Index dim = Eigen::Index{1} << n_keep;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    const std::uint64_t env_dim = std::uint64_t{1} << n_env;
    for (std::uint64_t e = 0; e < env_dim; ++e) {
        for (Eigen::Index a = 0; a < dim; ++a) {
            const Complex va = state.amplitude(scatter(static_cast<std::uint64_t>(a), e));
            if (va == Complex{0.0, 0.0}) {
                continue;
            }
            for (Eigen::Index b = 0; b < dim; ++b) {
                const Complex vb = state.amplitude(scatter(static_cast<std::uint64_t>(b), e));
                rho(a, b) += va * std::conj(vb);
            }
        }
    }
    return DensityMatrix(n_keep, std::move(rho));
}

double purity(const DensityMatrix& rho) {
    // Tr rho^2 = ||rho||_F^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

double renyi_entropy(const DensityMatrix& rho, int n) {
    if (n < 2) {
        throw std::invalid_argument("renyi_entropy: order must be >= 2");
    }
    const Eigen::VectorXd lambda = rho.eigenvalues();
    double trace_power = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        trace_power += std::pow(lambda(i), n);
    }
    return std::log(trace_power) / (1.0 - n);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const Eigen::VectorXd lambda = rho.eigenvalues();
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > 0.0) {
            entropy -= lambda(i) * std::log(lambda(i));
        }
    }
    return entropy;
}

double exact_renyi2(const Statevector& state, std::span<const int> keep) {
    return renyi_entropy(reduced_density_matrix(state, keep), 2);
}

} // namespace syksim
