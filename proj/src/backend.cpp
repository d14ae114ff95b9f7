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

#include "syksim/backend.hpp"

#include <stdexcept>

namespace syksim {

std::vector<double> Backend::probabilities(const Circuit&) const {
    throw std::runtime_error("Backend: exact probabilities unsupported by " + label());
}

CountsMap StatevectorBackend::counts(const Circuit& circuit, std::uint64_t shots,
                                     std::uint64_t seed) const {
    return run_circuit(circuit, shots, seed);
}

std::vector<double> StatevectorBackend::probabilities(const Circuit& circuit) const {
    return exact_probabilities(circuit);
}

} // namespace syksim
