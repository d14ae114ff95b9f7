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
#include <string>
#include <vector>

#include "syksim/circuit.hpp"

namespace syksim {

/// Executes measured circuits. Implementations must be deterministic given
/// (circuit, shots, seed) and safe to call from multiple threads.
class Backend {
  public:
    virtual ~Backend() = default;

    virtual CountsMap counts(const Circuit& circuit, std::uint64_t shots,
                             std::uint64_t seed) const = 0;

    /// Exact outcome distribution of the terminal measurement. Throws for
    /// backends that can only sample.
    virtual std::vector<double> probabilities(const Circuit& circuit) const;

    virtual std::string label() const = 0;
};

/// Noiseless dense-statevector execution.
class StatevectorBackend final : public Backend {
  public:
    CountsMap counts(const Circuit& circuit, std::uint64_t shots,
                     std::uint64_t seed) const override;
    std::vector<double> probabilities(const Circuit& circuit) const override;
    std::string label() const override { return "statevector"; }
};

} // namespace syksim
