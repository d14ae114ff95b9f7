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

#include "syksim/syk.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "syksim/rng.hpp"

namespace syksim {

namespace {

// Advances a strictly increasing q-tuple over [1, n] to its lexicographic
// successor; returns false past the last tuple.
bool next_combination(std::vector<int>& tuple, int n) {
    const int q = static_cast<int>(tuple.size());
    for (int pos = q - 1; pos >= 0; --pos) {
        if (tuple[pos] < n - (q - 1 - pos)) {
            ++tuple[pos];
            for (int j = pos + 1; j < q; ++j) {
                tuple[j] = tuple[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

void write_double(std::ostream& os, double v) {
    std::ostringstream tmp;
    tmp.precision(17);
    tmp << v;
    os << tmp.str();
}

} // namespace

double SykParams::coupling_variance() const {
    double factorial = 1.0;
    for (int i = 2; i <= q - 1; ++i) {
        factorial *= i;
    }
    return factorial * j_scale * j_scale / std::pow(static_cast<double>(n_majorana), q - 1);
}

void SykParams::validate() const {
    if (n_majorana < 4 || n_majorana % 2 != 0) {
        throw std::invalid_argument("SykParams: n_majorana must be even and >= 4, got " +
                                    std::to_string(n_majorana));
    }
    if (q < 2 || q % 2 != 0) {
        throw std::invalid_argument("SykParams: q must be even and >= 2, got " +
                                    std::to_string(q));
    }
    if (q > n_majorana) {
        throw std::invalid_argument("SykParams: q exceeds n_majorana");
    }
    if (!(j_scale > 0.0)) {
        throw std::invalid_argument("SykParams: j_scale must be positive");
    }
}

SykTerm::SykTerm(double c, PauliString p, std::vector<int> idx)
    : coefficient(c), op(std::move(p)), majorana_indices(std::move(idx)) {}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

std::map<std::vector<int>, double> sample_couplings(const SykParams& params) {
    params.validate();
    const double sigma = std::sqrt(params.coupling_variance());
    Rng rng(params.seed);

    std::map<std::vector<int>, double> couplings;
    std::vector<int> tuple(params.q);
    for (int i = 0; i < params.q; ++i) {
        tuple[i] = i + 1;
    }
    do {
        couplings.emplace(tuple, sigma * rng.gaussian());
    } while (next_combination(tuple, params.n_majorana));
    return couplings;
}

SykHamiltonian build_hamiltonian(const SykParams& params) {
    params.validate();
    const int n_qubits = params.n_qubits();

    SykHamiltonian h;
    h.params = params;
    h.n_qubits = n_qubits;
    h.terms.reserve(binomial(params.n_majorana, params.q));

    // i^(q/2) prefactor as a phase exponent.
    const int prefactor_exponent = params.q / 2;

    for (const auto& [tuple, coupling] : sample_couplings(params)) {
        PauliString product = majorana_to_pauli(tuple[0], n_qubits);
        for (std::size_t j = 1; j < tuple.size(); ++j) {
            product = multiply(product, majorana_to_pauli(tuple[j], n_qubits));
        }
        const int k = (product.phase_exponent() + prefactor_exponent) % 4;
        if (k != 0 && k != 2) {
            throw std::logic_error("build_hamiltonian: term phase is imaginary for tuple "
                                   "starting at " +
                                   std::to_string(tuple[0]));
        }
        const double sign = (k == 0) ? 1.0 : -1.0;
        h.terms.emplace_back(sign * coupling, product.with_phase_exponent(0), tuple);
    }
    return h;
}

void save_hamiltonian(const SykHamiltonian& h, std::ostream& os) {
    os << "syk_hamiltonian v1\n";
    os << "n_majorana " << h.params.n_majorana << "\n";
    os << "q " << h.params.q << "\n";
    os << "j_scale ";
    write_double(os, h.params.j_scale);
    os << "\n";
    os << "seed " << h.params.seed << "\n";
    os << "terms " << h.terms.size() << "\n";
    for (const auto& term : h.terms) {
        write_double(os, term.coefficient);
        os << " " << term.op.str();
        for (int idx : term.majorana_indices) {
            os << " " << idx;
        }
        os << "\n";
    }
}

SykHamiltonian load_hamiltonian(std::istream& is) {
    std::string word;
    std::string version;
    is >> word >> version;
    if (word != "syk_hamiltonian" || version != "v1") {
        throw std::runtime_error("load_hamiltonian: unrecognized file header");
    }

    SykHamiltonian h;
    std::size_t n_terms = 0;
    is >> word >> h.params.n_majorana;
    is >> word >> h.params.q;
    is >> word >> h.params.j_scale;
    is >> word >> h.params.seed;
    is >> word >> n_terms;
    if (!is) {
        throw std::runtime_error("load_hamiltonian: malformed parameter block");
    }
    h.params.validate();
    h.n_qubits = h.params.n_qubits();

    h.terms.reserve(n_terms);
    for (std::size_t i = 0; i < n_terms; ++i) {
        double coefficient = 0.0;
        std::string pauli_text;
        is >> coefficient >> pauli_text;
        std::vector<int> tuple(h.params.q);
        for (int& idx : tuple) {
            is >> idx;
        }
        if (!is) {
            throw std::runtime_error("load_hamiltonian: truncated term list at term " +
                                     std::to_string(i));
        }
        h.terms.emplace_back(coefficient, PauliString::from_text(pauli_text), tuple);
    }
    return h;
}

} // namespace syksim
