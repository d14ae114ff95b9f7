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
#include <span>
#include <string>
#include <vector>

#include "syksim/backend.hpp"
#include "syksim/circuit.hpp"
#include "syksim/rng.hpp"

namespace syksim {

/// Swap-test job: two copies of base_circuit plus one ancilla measure the
/// purity of the given subsystem.
struct SwapMbiJob {
    Circuit base_circuit = Circuit(1);
    std::vector<int> subsystem;
    std::uint64_t shots = 0;
};

/// Randomized-measurement job: n_unitaries independent draws of a local
/// Haar product unitary on the subsystem, shots_per_unitary Z-basis shots
/// each. shots_per_unitary == 0 selects the exact-probability mode.
struct RandomizedMeasurementJob {
    Circuit base_circuit = Circuit(1);
    std::vector<int> subsystem;
    std::uint64_t n_unitaries = 2;
    std::uint64_t shots_per_unitary = 0;
    std::uint64_t seed = 0;
    /// Exclude same-shot self-pairs (U-statistic); removes the ~2^L/shots
    /// upward bias of the plug-in estimator. Ignored in exact mode.
    bool unbiased = false;
};

/// Protocol output. When the purity estimate is nonpositive the entropy is
/// undefined: entropy_defined is false and renyi2/renyi2_std_error are NaN,
/// while the raw purity is kept.
struct EntropyEstimate {
    double purity = 0.0;
    double purity_std_error = 0.0;
    double renyi2 = 0.0;
    double renyi2_std_error = 0.0;
    bool entropy_defined = true;
    std::string protocol;
    std::uint64_t n_unitaries = 0;
    std::uint64_t shots = 0;
};

/// Builds the swap-test circuit: copies on [0, n) and [n, 2n), ancilla 2n;
/// H(ancilla), a controlled swap per subsystem qubit, H(ancilla), measure
/// the ancilla.
Circuit build_swap_test_circuit(const SwapMbiJob& job);

/// Purity and entropy from ancilla counts: purity = 2 P0 - 1, with binomial
/// error propagation.
EntropyEstimate estimate_purity_swap(const CountsMap& ancilla_counts);

/// Same from an exact ancilla probability (shots -> infinity mode); error
/// bars are zero. Pass shots > 0 to attach binomial error bars instead.
EntropyEstimate swap_estimate_from_p0(double p0, std::uint64_t shots);

/// Haar-distributed 2x2 unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase convention (Gram-Schmidt with real positive pivots).
Matrix2 sample_cue_unitary(Rng& rng);

/// Count of differing positions; throws on length mismatch.
int hamming_distance(std::string_view s, std::string_view s_prime);

/// Plug-in X statistic from an outcome distribution over 2^L bitstrings:
/// X = 2^L sum_{s,s'} (-2)^{-D[s,s']} P(s) P(s').
double rm_x_statistic(std::span<const double> probs);

/// Unbiased X from raw tallies over 2^L outcomes; requires >= 2 shots.
double rm_x_statistic_unbiased(std::span<const std::uint64_t> tallies);

/// Ensemble mean of X_a over fresh unitaries applied directly to `state`
/// (no circuit execution, exact probabilities). Fast path used by the exact
/// oracle comparisons. Optionally reports stddev(X_a)/sqrt(N_U).
double rm_xbar_exact(const Statevector& state, std::span<const int> subsystem,
                     std::uint64_t n_unitaries, std::uint64_t seed,
                     double* xbar_std_error = nullptr);

/// Full randomized-measurement protocol against a backend. Per-unitary
/// seeds are derived from job.seed, so results do not depend on execution
/// order. std errors: stddev(X_a)/sqrt(N_U) on purity, propagated through
/// the log for the entropy.
EntropyEstimate run_randomized_measurement(const RandomizedMeasurementJob& job,
                                           const Backend& backend);

/// Bootstrap standard error of the mean of xs (resampling with replacement).
double bootstrap_std_error(std::span<const double> xs, std::uint64_t resamples,
                           std::uint64_t seed);

/// X_a values per unitary, for callers that post-process (mitigation,
/// bootstrap over unitaries).
std::vector<double> rm_per_unitary_x(const RandomizedMeasurementJob& job,
                                     const Backend& backend);

/// Assembles the protocol estimate from per-unitary X_a values.
EntropyEstimate rm_estimate_from_x(std::span<const double> x_values, std::uint64_t shots_per_unitary);

/// The L sampled single-qubit unitaries for unitary index a of a job seed.
std::vector<Matrix2> rm_unitaries_for(std::uint64_t seed, std::uint64_t unitary_index,
                                      std::size_t n_qubits);

} // namespace syksim
