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

#include "syksim/executor.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "syksim/rng.hpp"

namespace syksim {

using json = nlohmann::json;

namespace {

constexpr double kCrosstalkKickAngle = 0.2;

Gate shift_gate_by(const Gate& g, int offset, int new_width) {
    Gate out = g;
    if (out.target >= 0) {
        out.target += offset;
    }
    if (out.control >= 0) {
        out.control += offset;
    }
    if (out.target2 >= 0) {
        out.target2 += offset;
    }
    for (int& q : out.targets) {
        q += offset;
    }
    if (g.kind == GateKind::PauliRotation) {
        out.pauli = PauliString(new_width, g.pauli.x_bits() << offset,
                                g.pauli.z_bits() << offset, g.pauli.phase_exponent());
    }
    return out;
}

std::uint64_t job_seed(std::uint64_t master, const std::string& job_id) {
    return derive_seed(master, fnv1a64(job_id));
}

} // namespace

Circuit QmpPackage::composite() const {
    Circuit wide(total_qubits);
    std::vector<int> combined_measurement;
    for (const Member& member : members) {
        for (const Gate& g : member.circuit.gates()) {
            if (g.is_measurement()) {
                for (int q : g.targets) {
                    combined_measurement.push_back(q + member.offset);
                }
                continue;
            }
            wide.append(shift_gate_by(g, member.offset, total_qubits));
        }
    }
    if (!combined_measurement.empty()) {
        wide.append(Gate::measure(std::move(combined_measurement)));
    }
    return wide;
}

std::vector<QmpPackage> pack(const std::vector<Circuit>& circuits, int pack_size,
                             int buffer_qubits) {
    if (pack_size < 1) {
        throw std::invalid_argument("pack: pack_size must be >= 1");
    }
    if (buffer_qubits < 0) {
        throw std::invalid_argument("pack: buffer_qubits must be >= 0");
    }
    for (const Circuit& c : circuits) {
        if (c.n_qubits() > Statevector::kMaxQubits) {
            throw std::invalid_argument("pack: a member circuit exceeds the engine limit");
        }
    }

    std::vector<QmpPackage> packages;
    packages.reserve((circuits.size() + static_cast<std::size_t>(pack_size) - 1) /
                     static_cast<std::size_t>(pack_size));
    std::size_t index = 0;
    while (index < circuits.size()) {
        QmpPackage package;
        package.buffer_qubits = buffer_qubits;
        int offset = 0;
        for (int k = 0; k < pack_size && index < circuits.size(); ++k, ++index) {
            if (k > 0) {
                offset += buffer_qubits;
            }
            package.members.push_back(
                {circuits[index], offset, std::to_string(index)});
            offset += circuits[index].n_qubits();
        }
        package.total_qubits = offset;
        packages.push_back(std::move(package));
    }
    return packages;
}

CampaignResult run_campaign(const CampaignSpec& spec, const Backend& backend,
                            const std::optional<std::filesystem::path>& manifest) {
    if (spec.worker_count < 1) {
        throw std::invalid_argument("run_campaign: worker_count must be >= 1");
    }
    {
        std::set<std::string> ids;
        for (const CampaignJob& job : spec.jobs) {
            if (!ids.insert(job.id).second) {
                throw std::invalid_argument("run_campaign: duplicate job id \"" + job.id +
                                            "\"");
            }
        }
    }

    CampaignResult results;
    std::set<std::string> completed;
    if (manifest && std::filesystem::exists(*manifest)) {
        std::ifstream in(*manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const json record = json::parse(line);
            JobResult prior;
            prior.seed = record.at("seed").get<std::uint64_t>();
            prior.package_index = record.at("package_id").get<int>();
            if (record.contains("error")) {
                prior.error = record.at("error").get<std::string>();
            }
            if (record.contains("counts")) {
                for (const auto& [bits, count] : record.at("counts").items()) {
                    prior.counts[bits] = count.get<std::uint64_t>();
                }
            }
            const std::string id = record.at("job_id").get<std::string>();
            completed.insert(id);
            results[id] = std::move(prior);
        }
    }

    // Group pending jobs into packages; the package is the scheduling unit.
    std::vector<const CampaignJob*> pending;
    for (const CampaignJob& job : spec.jobs) {
        if (completed.count(job.id) == 0) {
            pending.push_back(&job);
        }
    }
    struct PackageSlot {
        std::vector<const CampaignJob*> members;
        int index = 0;
    };
    std::vector<PackageSlot> packages;
    for (std::size_t i = 0; i < pending.size(); i += static_cast<std::size_t>(spec.pack_size)) {
        PackageSlot slot;
        slot.index = static_cast<int>(packages.size());
        const std::size_t end =
            std::min(pending.size(), i + static_cast<std::size_t>(spec.pack_size));
        for (std::size_t j = i; j < end; ++j) {
            slot.members.push_back(pending[j]);
        }
        packages.push_back(std::move(slot));
    }

    std::mutex sink_mutex;
    std::ofstream manifest_out;
    if (manifest) {
        manifest_out.open(*manifest, std::ios::app);
        if (!manifest_out) {
            throw std::runtime_error("run_campaign: cannot open manifest " +
                                     manifest->string());
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t p = next.fetch_add(1);
            if (p >= packages.size()) {
                return;
            }
            for (const CampaignJob* job : packages[p].members) {
                JobResult result;
                result.package_index = packages[p].index;
                result.seed = job_seed(spec.master_seed, job->id);
                try {
                    result.counts = backend.counts(job->circuit, spec.shots, result.seed);
                } catch (const std::exception& e) {
                    result.error = e.what();
                }
                std::lock_guard<std::mutex> lock(sink_mutex);
                if (manifest) {
                    json record;
                    record["job_id"] = job->id;
                    record["package_id"] = result.package_index;
                    record["seed"] = result.seed;
                    if (result.ok()) {
                        json counts = json::object();
                        for (const auto& [bits, count] : result.counts) {
                            counts[bits] = count;
                        }
                        record["counts"] = std::move(counts);
                    } else {
                        record["error"] = result.error;
                    }
                    manifest_out << record.dump() << "\n";
                }
                results[job->id] = std::move(result);
            }
        }
    };

    const int n_workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(spec.worker_count),
                              std::max<std::size_t>(packages.size(), 1)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    if (manifest) {
        manifest_out.flush();
    }
    return results;
}

CampaignResult run_package_with_crosstalk(const QmpPackage& package, const NoiseModel& noise,
                                          double strength, std::uint64_t shots,
                                          std::uint64_t master_seed,
                                          std::uint64_t max_trajectories) {
    if (!(strength >= 0.0 && strength < 1.0)) {
        throw std::invalid_argument("run_package_with_crosstalk: strength must be in [0, 1)");
    }
    noise.validate();
    if (package.total_qubits > Statevector::kMaxQubits) {
        throw std::invalid_argument("run_package_with_crosstalk: package exceeds engine "
                                    "limit");
    }

    // Boundary chain: every adjacent physical pair in the gap between
    // consecutive members, buffers included.
    std::vector<std::pair<int, int>> boundary_pairs;
    for (std::size_t m = 0; m + 1 < package.members.size(); ++m) {
        const int last = package.members[m].offset + package.members[m].circuit.n_qubits() - 1;
        const int next_first = package.members[m + 1].offset;
        for (int q = last; q < next_first; ++q) {
            boundary_pairs.emplace_back(q, q + 1);
        }
    }

    const Circuit wide = package.composite();
    const double p1 = noise.single_qubit_depolarizing;
    const double p2 = noise.two_qubit_depolarizing;

    // ASAP layer schedule of the composite. Same-layer gates touch disjoint
    // qubits, so replaying in layer order preserves the unitary. A boundary
    // pair suffers a kick opportunity in every layer that drives both of its
    // qubits; idle buffers never co-drive with a member.
    std::vector<std::vector<const Gate*>> layers;
    std::vector<int> qubit_level(static_cast<std::size_t>(wide.n_qubits()), 0);
    for (const Gate& g : wide.gates()) {
        if (g.is_measurement()) {
            continue;
        }
        int level = 0;
        for (int q : g.qubits()) {
            level = std::max(level, qubit_level[static_cast<std::size_t>(q)]);
        }
        ++level;
        for (int q : g.qubits()) {
            qubit_level[static_cast<std::size_t>(q)] = level;
        }
        if (layers.size() < static_cast<std::size_t>(level)) {
            layers.resize(static_cast<std::size_t>(level));
        }
        layers[static_cast<std::size_t>(level - 1)].push_back(&g);
    }
    std::vector<std::vector<std::pair<int, int>>> kicks_per_layer(layers.size());
    for (std::size_t layer = 0; layer < layers.size(); ++layer) {
        std::uint64_t driven = 0;
        for (const Gate* g : layers[layer]) {
            for (int q : g->qubits()) {
                driven |= std::uint64_t{1} << q;
            }
        }
        for (const auto& pair : boundary_pairs) {
            const std::uint64_t mask = (std::uint64_t{1} << pair.first) |
                                       (std::uint64_t{1} << pair.second);
            if ((driven & mask) == mask) {
                kicks_per_layer[layer].push_back(pair);
            }
        }
    }

    // Per-member measured qubits on the wide register.
    struct MemberView {
        std::string job_id;
        std::vector<int> measured;
        std::uint64_t seed;
    };
    std::vector<MemberView> views;
    for (const QmpPackage::Member& member : package.members) {
        MemberView view;
        view.job_id = member.job_id;
        for (int q : member.circuit.measured_qubits()) {
            view.measured.push_back(q + member.offset);
        }
        view.seed = job_seed(master_seed, member.job_id);
        views.push_back(std::move(view));
    }

    static const std::array<Matrix2, 4> kPaulis = {
        Matrix2{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}},
        Matrix2{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}},
        Matrix2{Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}},
        Matrix2{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}},
    };

    const std::uint64_t trajectories = std::min(shots, max_trajectories);
    CampaignResult results;
    for (const MemberView& view : views) {
        results[view.job_id] = JobResult{{}, "", view.seed, 0};
    }

    for (std::uint64_t traj = 0; traj < trajectories; ++traj) {
        const std::uint64_t traj_shots =
            shots / trajectories + (traj < shots % trajectories ? 1 : 0);
        if (traj_shots == 0) {
            continue;
        }
        Rng noise_rng(derive_seed(master_seed, traj, 0x9e37));
        Statevector state(wide.n_qubits());
        for (std::size_t layer = 0; layer < layers.size(); ++layer) {
            for (const Gate* gp : layers[layer]) {
                const Gate& g = *gp;
                apply_gate(state, g);
                if (g.is_two_qubit_entangler() && p2 > 0.0 && noise_rng.uniform() < p2) {
                    const int idx = static_cast<int>(noise_rng.uniform_int(15)) + 1;
                    if ((idx & 3) != 0) {
                        state.apply_single_qubit(kPaulis[static_cast<std::size_t>(idx & 3)],
                                                 g.target);
                    }
                    if ((idx >> 2) != 0) {
                        state.apply_single_qubit(kPaulis[static_cast<std::size_t>(idx >> 2)],
                                                 g.control);
                    }
                } else if (!g.is_two_qubit_entangler() && p1 > 0.0 &&
                           noise_rng.uniform() < p1) {
                    const int idx = static_cast<int>(noise_rng.uniform_int(3)) + 1;
                    state.apply_single_qubit(kPaulis[static_cast<std::size_t>(idx)],
                                             g.target);
                }
            }
            if (strength > 0.0) {
                for (const auto& [qa, qb] : kicks_per_layer[layer]) {
                    if (noise_rng.uniform() < strength) {
                        const double sign = noise_rng.uniform() < 0.5 ? 1.0 : -1.0;
                        const std::uint64_t zz =
                            (std::uint64_t{1} << qa) | (std::uint64_t{1} << qb);
                        state.apply_pauli_rotation(PauliString(wide.n_qubits(), 0, zz, 0),
                                                   sign * kCrosstalkKickAngle);
                    }
                }
            }
        }

        // Demultiplex: each member samples its own marginal with its own
        // stream, advanced per trajectory.
        for (const MemberView& view : views) {
            if (view.measured.empty()) {
                continue;
            }
            const std::vector<double> probs = state.marginal_probabilities(view.measured);
            std::vector<double> cumulative(probs.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                acc += probs[i];
                cumulative[i] = acc;
            }
            cumulative.back() = std::max(cumulative.back(), 1.0);
            Rng rng(derive_seed(view.seed, traj));
            for (std::uint64_t s = 0; s < traj_shots; ++s) {
                const double u = rng.uniform();
                const std::size_t outcome = static_cast<std::size_t>(
                    std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                    cumulative.begin());
                results[view.job_id]
                    .counts[bits_to_string(outcome, static_cast<int>(view.measured.size()))]++;
            }
        }
    }
    return results;
}

} // namespace syksim
