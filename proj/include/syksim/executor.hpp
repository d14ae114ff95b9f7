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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syksim/backend.hpp"
#include "syksim/circuit.hpp"
#include "syksim/noise.hpp"

namespace syksim {

/// A multi-programming package: independent member circuits laid out on
/// disjoint qubit ranges with idle buffer qubits between neighbors.
struct QmpPackage {
    struct Member {
        Circuit circuit;
        int offset = 0;
        std::string job_id;
    };

    std::vector<Member> members;
    int buffer_qubits = 1;
    int total_qubits = 0;

    /// The members merged onto the wide register, measurements combined into
    /// one terminal gate ordered by member.
    Circuit composite() const;
};

/// Greedy order-preserving packing of up to pack_size circuits per package.
std::vector<QmpPackage> pack(const std::vector<Circuit>& circuits, int pack_size,
                             int buffer_qubits);

struct CampaignJob {
    std::string id;
    Circuit circuit;
};

struct CampaignSpec {
    std::vector<CampaignJob> jobs;
    std::uint64_t shots = 1024;
    int pack_size = 5;
    int buffer_qubits = 1;
    std::uint64_t master_seed = 0;
    int worker_count = 1;
};

struct JobResult {
    CountsMap counts;
    std::string error; // empty on success
    std::uint64_t seed = 0;
    int package_index = -1;

    bool ok() const { return error.empty(); }
};

using CampaignResult = std::map<std::string, JobResult>;

/// Runs every job through the backend across a worker pool. Each job's seed
/// is derive_seed(master_seed, fnv1a64(job_id)), so per-job counts are
/// independent of packing, worker count and scheduling order. Failures are
/// recorded per job without aborting the campaign.
///
/// With a manifest path, finished jobs are appended as JSON lines and jobs
/// already present in the file are skipped (resume support).
CampaignResult run_campaign(const CampaignSpec& spec, const Backend& backend,
                            const std::optional<std::filesystem::path>& manifest = {});

/// Executes one package as a single wide trajectory simulation with
/// gate-activated crosstalk: a gate touching a boundary-adjacent qubit
/// applies a random-sign ZZ kick on that boundary pair with probability
/// `strength`. Buffer qubits sit in the boundary chain, so they absorb
/// kicks that would otherwise land on the neighboring member. Zero
/// strength reduces to independent member execution semantics.
CampaignResult run_package_with_crosstalk(const QmpPackage& package, const NoiseModel& noise,
                                          double strength, std::uint64_t shots,
                                          std::uint64_t master_seed,
                                          std::uint64_t max_trajectories = 4096);

} // namespace syksim
