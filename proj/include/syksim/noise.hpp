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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "syksim/backend.hpp"
#include "syksim/circuit.hpp"
#include "syksim/rng.hpp"

namespace syksim {

/// Per-qubit readout flips: p01 = P(read 1 | prepared 0), p10 = P(read 0 |
/// prepared 1).
struct ReadoutFlip {
    double p01 = 0.0;
    double p10 = 0.0;
};

/// Stochastic gate-noise model for decomposed circuits. Depolarizing
/// channels insert a uniformly random non-identity Pauli after a gate with
/// the given probability; the coherent term applies a deterministic
/// exp(-i eps ZZ) after every two-qubit gate.
struct NoiseModel {
    double two_qubit_depolarizing = 0.0;
    double single_qubit_depolarizing = 0.0;
    /// Broadcast to every qubit when it holds a single entry.
    std::vector<ReadoutFlip> readout_flip;
    double coherent_zz_overrotation = 0.0;

    void validate() const;
    bool has_readout_error() const;
    ReadoutFlip readout_for(int qubit) const;
    std::string label() const;
};

/// Trajectory sampling of a noisy execution. Each trajectory draws one
/// realization of the stochastic Pauli noise and contributes
/// shots/trajectories measurement samples; by default one trajectory per
/// shot (capped at max_trajectories). Rejects circuits containing native
/// Pauli rotations or controlled swaps: noise attaches to basis gates only.
class NoisyBackend final : public Backend {
  public:
    explicit NoisyBackend(NoiseModel model, std::uint64_t max_trajectories = 4096);

    CountsMap counts(const Circuit& circuit, std::uint64_t shots,
                     std::uint64_t seed) const override;
    std::string label() const override;

    const NoiseModel& model() const { return model_; }

  private:
    NoiseModel model_;
    std::uint64_t max_trajectories_;
};

/// Global unitary folding: circuit -> circuit (circuit^dag circuit)^((f-1)/2)
/// on the unitary portion, measurement re-appended. Requires odd factor.
Circuit fold_circuit(const Circuit& circuit, int factor);

enum class ZneFit { Linear, Exponential };

/// Least-squares extrapolation of (noise factor, value) points to factor 0.
/// The exponential fit runs in log space and falls back to linear (with
/// *fell_back = true) when the values change sign or hit zero.
double zne_extrapolate(std::span<const std::pair<double, double>> points, ZneFit fit,
                       bool* fell_back = nullptr);

/// n_twirls copies of the circuit with every CX/CZ conjugated by uniformly
/// random Paulis and the exact compensating Paulis (sign absorbed into a
/// single-qubit matrix), so each copy equals the original as a unitary.
std::vector<Circuit> pauli_twirl(const Circuit& circuit, int n_twirls, Rng& rng);

/// Tensored confusion-matrix inversion. flips[j] describes measured bit j.
/// Returns a quasi-probability distribution (entries may be slightly
/// negative) summing to 1. Throws if any confusion matrix is singular.
std::map<std::string, double> readout_mitigate(const CountsMap& counts,
                                               std::span<const ReadoutFlip> flips);

/// Forward corruption of an exact distribution by the confusion matrices;
/// the test-side inverse of readout_mitigate.
std::vector<double> apply_confusion(std::span<const double> probs,
                                    std::span<const ReadoutFlip> flips);

struct MitigationConfig {
    std::vector<int> zne_factors{1, 3, 5};
    ZneFit zne_fit = ZneFit::Linear;
    int pauli_twirls = 10;
    bool readout_mitigation = true;

    void validate() const;
    std::string label() const;
};

} // namespace syksim
