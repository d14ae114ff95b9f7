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

#include "syksim/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "syksim/exact.hpp"
#include "syksim/executor.hpp"

namespace syksim {

using json = nlohmann::json;

namespace {

constexpr double kTimeGridTol = 1e-9;
constexpr double kLn2 = 0.69314718055994530942;

std::string subsystem_tag(const std::vector<int>& subsystem) {
    std::string tag;
    for (std::size_t i = 0; i < subsystem.size(); ++i) {
        if (i > 0) {
            tag += '+';
        }
        tag += std::to_string(subsystem[i]);
    }
    return tag;
}

void append_ccx(Circuit& circuit, int c1, int c2, int target) {
    circuit.append(Gate::hadamard(target));
    circuit.append(Gate::cx(c2, target));
    circuit.append(Gate::unitary(kTdgGate, target, "tdg"));
    circuit.append(Gate::cx(c1, target));
    circuit.append(Gate::unitary(kTGate, target, "t"));
    circuit.append(Gate::cx(c2, target));
    circuit.append(Gate::unitary(kTdgGate, target, "tdg"));
    circuit.append(Gate::cx(c1, target));
    circuit.append(Gate::unitary(kTGate, c2, "t"));
    circuit.append(Gate::unitary(kTGate, target, "t"));
    circuit.append(Gate::hadamard(target));
    circuit.append(Gate::cx(c1, c2));
    circuit.append(Gate::unitary(kTGate, c1, "t"));
    circuit.append(Gate::unitary(kTdgGate, c2, "tdg"));
    circuit.append(Gate::cx(c1, c2));
}

double p0_from_counts(const CountsMap& counts) {
    std::uint64_t shots = 0;
    std::uint64_t zeros = 0;
    for (const auto& [bits, count] : counts) {
        shots += count;
        if (bits == "0") {
            zeros = count;
        }
    }
    if (shots == 0) {
        throw std::runtime_error("experiment: empty counts for swap cell");
    }
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

double p0_from_quasi(const std::map<std::string, double>& quasi) {
    const auto it = quasi.find("0");
    return it == quasi.end() ? 0.0 : it->second;
}

std::vector<double> quasi_to_probs(const std::map<std::string, double>& quasi,
                                   std::size_t n_bits) {
    std::vector<double> probs(std::size_t{1} << n_bits, 0.0);
    for (const auto& [bits, weight] : quasi) {
        probs[string_to_bits(bits)] = weight;
    }
    return probs;
}

std::vector<double> counts_to_probs(const CountsMap& counts, std::size_t n_bits,
                                    std::uint64_t shots) {
    std::vector<double> probs(std::size_t{1} << n_bits, 0.0);
    for (const auto& [bits, count] : counts) {
        probs[string_to_bits(bits)] = static_cast<double>(count) / static_cast<double>(shots);
    }
    return probs;
}

const CountsMap& counts_or_throw(const CampaignResult& results, const std::string& id) {
    const JobResult& r = results.at(id);
    if (!r.ok()) {
        throw std::runtime_error("experiment: job \"" + id + "\" failed: " + r.error);
    }
    return r.counts;
}

// Shared context for one (time, subsystem) cell.
struct CellContext {
    const ExperimentConfig* config = nullptr;
    double t = 0.0;
    std::size_t time_index = 0;
    std::vector<int> subsystem;
    std::size_t subsystem_index = 0;
    const Circuit* base_native = nullptr;
    const Circuit* base_decomposed = nullptr;
    double s2_exact = 0.0;
    double s2_exact_trotter = 0.0;

    std::string tag(const std::string& suffix) const {
        return "t" + std::to_string(time_index) + "/L" + subsystem_tag(subsystem) + "/" +
               suffix;
    }

    std::uint64_t seed_for(const std::string& purpose) const {
        return derive_seed(config->master_seed, fnv1a64(tag(purpose)));
    }

    ResultRow make_row(const EntropyEstimate& est, const std::string& noise_label,
                       const std::string& mitigation_label) const {
        ResultRow row;
        row.t = t;
        row.subsystem = subsystem;
        row.protocol = est.protocol;
        row.purity = est.purity;
        row.s2 = est.renyi2;
        row.std_error = est.renyi2_std_error;
        row.s2_exact = s2_exact;
        row.s2_exact_trotter = s2_exact_trotter;
        row.n_unitaries = est.n_unitaries;
        row.shots = est.shots;
        row.noise_label = noise_label;
        row.mitigation_label = mitigation_label;
        row.entropy_defined = est.entropy_defined;
        return row;
    }
};

CampaignResult run_cell_campaign(const CellContext& ctx, std::vector<CampaignJob> jobs,
                                 std::uint64_t shots, const Backend& backend) {
    CampaignSpec spec;
    spec.jobs = std::move(jobs);
    spec.shots = shots;
    spec.pack_size = ctx.config->pack_size;
    spec.buffer_qubits = ctx.config->buffer_qubits;
    spec.master_seed = ctx.config->master_seed;
    spec.worker_count = ctx.config->worker_count;
    return run_campaign(spec, backend);
}

ResultRow swap_cell_sampled(const CellContext& ctx, const Circuit& swap_circuit,
                            const Backend& backend, const std::string& noise_label,
                            const std::string& setting) {
    const std::string id = ctx.tag("swap/" + setting);
    const CampaignResult results =
        run_cell_campaign(ctx, {{id, swap_circuit}}, ctx.config->shots, backend);
    EntropyEstimate est = estimate_purity_swap(counts_or_throw(results, id));
    return ctx.make_row(est, noise_label, "none");
}

std::vector<Circuit> rm_circuits(const CellContext& ctx, const Circuit& base,
                                 std::uint64_t rm_seed) {
    std::vector<Circuit> circuits;
    circuits.reserve(ctx.config->rm_n_unitaries);
    for (std::uint64_t a = 0; a < ctx.config->rm_n_unitaries; ++a) {
        const std::vector<Matrix2> us = rm_unitaries_for(rm_seed, a, ctx.subsystem.size());
        Circuit circuit = base;
        for (std::size_t i = 0; i < ctx.subsystem.size(); ++i) {
            circuit.append(Gate::unitary(us[i], ctx.subsystem[i], "cue"));
        }
        circuit.append(Gate::measure(ctx.subsystem));
        circuits.push_back(std::move(circuit));
    }
    return circuits;
}

ResultRow rm_cell_sampled(const CellContext& ctx, const Circuit& base, const Backend& backend,
                          const std::string& noise_label, const std::string& setting) {
    const std::uint64_t rm_seed = ctx.seed_for("rm/unitaries");
    const std::vector<Circuit> circuits = rm_circuits(ctx, base, rm_seed);

    std::vector<CampaignJob> jobs;
    jobs.reserve(circuits.size());
    for (std::size_t a = 0; a < circuits.size(); ++a) {
        jobs.push_back({ctx.tag("rm/" + setting + "/u" + std::to_string(a)), circuits[a]});
    }
    const CampaignResult results =
        run_cell_campaign(ctx, std::move(jobs), ctx.config->rm_shots_per_unitary, backend);

    const std::size_t n_bits = ctx.subsystem.size();
    std::vector<double> xs;
    xs.reserve(circuits.size());
    for (std::size_t a = 0; a < circuits.size(); ++a) {
        const CountsMap& counts =
            counts_or_throw(results, ctx.tag("rm/" + setting + "/u" + std::to_string(a)));
        if (ctx.config->rm_unbiased) {
            std::vector<std::uint64_t> tallies(std::size_t{1} << n_bits, 0);
            for (const auto& [bits, count] : counts) {
                tallies[string_to_bits(bits)] = count;
            }
            xs.push_back(rm_x_statistic_unbiased(tallies));
        } else {
            xs.push_back(rm_x_statistic(
                counts_to_probs(counts, n_bits, ctx.config->rm_shots_per_unitary)));
        }
    }
    EntropyEstimate est = rm_estimate_from_x(xs, ctx.config->rm_shots_per_unitary);
    return ctx.make_row(est, noise_label, "none");
}

std::vector<ReadoutFlip> flips_for_measured(const NoiseModel& model,
                                            const std::vector<int>& measured) {
    std::vector<ReadoutFlip> flips;
    flips.reserve(measured.size());
    for (int q : measured) {
        flips.push_back(model.readout_for(q));
    }
    return flips;
}

// Mean over twirl copies of the (optionally readout-mitigated) outcome
// distributions, one campaign per (factor, twirl) block.
struct MitigatedSwap {
    ResultRow row;
    MitigationDetail detail;
};

MitigatedSwap swap_cell_mitigated(const CellContext& ctx, const Circuit& swap_basis,
                                  const NoisyBackend& backend) {
    const MitigationConfig& mit = *ctx.config->mitigation;
    const NoiseModel& model = backend.model();
    const std::vector<int> measured = swap_basis.measured_qubits();
    const std::vector<ReadoutFlip> flips = flips_for_measured(model, measured);

    std::vector<std::vector<double>> purity_fw(mit.zne_factors.size());
    for (std::size_t fi = 0; fi < mit.zne_factors.size(); ++fi) {
        const int factor = mit.zne_factors[fi];
        const Circuit folded = fold_circuit(swap_basis, factor);
        Rng twirl_rng(ctx.seed_for("swap/twirl/f" + std::to_string(factor)));
        const std::vector<Circuit> twirled =
            pauli_twirl(folded, mit.pauli_twirls, twirl_rng);

        std::vector<CampaignJob> jobs;
        for (std::size_t w = 0; w < twirled.size(); ++w) {
            jobs.push_back({ctx.tag("swap/mit/f" + std::to_string(factor) + "/w" +
                                    std::to_string(w)),
                            twirled[w]});
        }
        const CampaignResult results =
            run_cell_campaign(ctx, std::move(jobs), ctx.config->shots, backend);

        for (std::size_t w = 0; w < twirled.size(); ++w) {
            const CountsMap& counts = counts_or_throw(
                results, ctx.tag("swap/mit/f" + std::to_string(factor) + "/w" +
                                 std::to_string(w)));
            double p0 = 0.0;
            if (mit.readout_mitigation && model.has_readout_error()) {
                p0 = p0_from_quasi(readout_mitigate(counts, flips));
            } else {
                p0 = p0_from_counts(counts);
            }
            purity_fw[fi].push_back(2.0 * p0 - 1.0);
        }
    }

    auto factor_means = [&](const std::vector<std::vector<std::size_t>>* resample) {
        std::vector<std::pair<double, double>> points;
        for (std::size_t fi = 0; fi < purity_fw.size(); ++fi) {
            double sum = 0.0;
            const std::size_t n = purity_fw[fi].size();
            for (std::size_t w = 0; w < n; ++w) {
                const std::size_t pick = resample ? (*resample)[fi][w] : w;
                sum += purity_fw[fi][pick];
            }
            points.emplace_back(static_cast<double>(ctx.config->mitigation->zne_factors[fi]),
                                sum / static_cast<double>(n));
        }
        return points;
    };

    bool fell_back = false;
    const std::vector<std::pair<double, double>> points = factor_means(nullptr);
    const double purity_mit = zne_extrapolate(points, mit.zne_fit, &fell_back);

    // Bootstrap over twirl replicas through the full extrapolation.
    constexpr std::uint64_t kResamples = 200;
    Rng boot_rng(ctx.seed_for("swap/mit/bootstrap"));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t b = 0; b < kResamples; ++b) {
        std::vector<std::vector<std::size_t>> resample(purity_fw.size());
        for (std::size_t fi = 0; fi < purity_fw.size(); ++fi) {
            for (std::size_t w = 0; w < purity_fw[fi].size(); ++w) {
                resample[fi].push_back(boot_rng.uniform_int(purity_fw[fi].size()));
            }
        }
        const double value = zne_extrapolate(factor_means(&resample), mit.zne_fit);
        sum += value;
        sum_sq += value * value;
    }
    const double boot_mean = sum / kResamples;
    const double boot_var = std::max(sum_sq / kResamples - boot_mean * boot_mean, 0.0);

    EntropyEstimate est;
    est.protocol = "swap_mbi";
    est.shots = ctx.config->shots;
    est.purity = purity_mit;
    est.purity_std_error = std::sqrt(boot_var);
    if (purity_mit > 0.0) {
        est.renyi2 = -std::log(purity_mit);
        est.renyi2_std_error = est.purity_std_error / purity_mit;
    } else {
        est.entropy_defined = false;
        est.renyi2 = std::numeric_limits<double>::quiet_NaN();
        est.renyi2_std_error = std::numeric_limits<double>::quiet_NaN();
    }

    MitigatedSwap out;
    out.row = ctx.make_row(est, model.label(), mit.label());
    out.detail.t = ctx.t;
    out.detail.subsystem = ctx.subsystem;
    out.detail.protocol = "swap_mbi";
    out.detail.raw_value = points.front().second;
    out.detail.per_factor = points;
    out.detail.extrapolated = purity_mit;
    out.detail.fit_fell_back = fell_back;
    return out;
}

struct MitigatedRm {
    ResultRow row;
    MitigationDetail detail;
};

MitigatedRm rm_cell_mitigated(const CellContext& ctx, const Circuit& base_decomposed,
                              const NoisyBackend& backend) {
    const MitigationConfig& mit = *ctx.config->mitigation;
    const NoiseModel& model = backend.model();
    const std::uint64_t rm_seed = ctx.seed_for("rm/unitaries");
    const std::vector<Circuit> bases = rm_circuits(ctx, base_decomposed, rm_seed);
    const std::size_t n_bits = ctx.subsystem.size();
    const std::size_t n_u = bases.size();

    // x_values[fi][a] accumulates the twirl-averaged X per factor.
    std::vector<std::vector<double>> x_fa(mit.zne_factors.size(),
                                          std::vector<double>(n_u, 0.0));

    for (std::size_t fi = 0; fi < mit.zne_factors.size(); ++fi) {
        const int factor = mit.zne_factors[fi];
        for (int w = 0; w < mit.pauli_twirls; ++w) {
            std::vector<CampaignJob> jobs;
            jobs.reserve(n_u);
            Rng twirl_rng(ctx.seed_for("rm/twirl/f" + std::to_string(factor) + "/w" +
                                       std::to_string(w)));
            for (std::size_t a = 0; a < n_u; ++a) {
                const Circuit folded = fold_circuit(bases[a], factor);
                std::vector<Circuit> copies = pauli_twirl(folded, 1, twirl_rng);
                jobs.push_back({ctx.tag("rm/mit/f" + std::to_string(factor) + "/w" +
                                        std::to_string(w) + "/u" + std::to_string(a)),
                                std::move(copies.front())});
            }
            const CampaignResult results = run_cell_campaign(
                ctx, std::move(jobs), ctx.config->rm_shots_per_unitary, backend);
            for (std::size_t a = 0; a < n_u; ++a) {
                const CountsMap& counts = counts_or_throw(
                    results, ctx.tag("rm/mit/f" + std::to_string(factor) + "/w" +
                                     std::to_string(w) + "/u" + std::to_string(a)));
                std::vector<double> probs;
                if (mit.readout_mitigation && model.has_readout_error()) {
                    const std::vector<ReadoutFlip> flips =
                        flips_for_measured(model, ctx.subsystem);
                    probs = quasi_to_probs(readout_mitigate(counts, flips), n_bits);
                } else {
                    probs = counts_to_probs(counts, n_bits,
                                            ctx.config->rm_shots_per_unitary);
                }
                x_fa[fi][a] += rm_x_statistic(probs) / mit.pauli_twirls;
            }
        }
    }

    // Extrapolate per unitary, then average (Eq.-style ensemble mean last).
    std::vector<double> x_mitigated(n_u, 0.0);
    bool any_fallback = false;
    for (std::size_t a = 0; a < n_u; ++a) {
        std::vector<std::pair<double, double>> points;
        for (std::size_t fi = 0; fi < mit.zne_factors.size(); ++fi) {
            points.emplace_back(static_cast<double>(mit.zne_factors[fi]), x_fa[fi][a]);
        }
        bool fell_back = false;
        x_mitigated[a] = zne_extrapolate(points, mit.zne_fit, &fell_back);
        any_fallback = any_fallback || fell_back;
    }

    EntropyEstimate est = rm_estimate_from_x(x_mitigated, ctx.config->rm_shots_per_unitary);

    MitigatedRm out;
    out.row = ctx.make_row(est, model.label(), mit.label());
    out.detail.t = ctx.t;
    out.detail.subsystem = ctx.subsystem;
    out.detail.protocol = "rm";
    for (std::size_t fi = 0; fi < mit.zne_factors.size(); ++fi) {
        double mean = 0.0;
        for (double x : x_fa[fi]) {
            mean += x;
        }
        out.detail.per_factor.emplace_back(static_cast<double>(mit.zne_factors[fi]),
                                           mean / static_cast<double>(n_u));
    }
    out.detail.raw_value = out.detail.per_factor.front().second;
    out.detail.extrapolated = est.purity;
    out.detail.fit_fell_back = any_fallback;
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    try {
        syk.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config.syk: ") + e.what());
    }
    if (!(trotter_dt > 0.0)) {
        throw std::invalid_argument("config.trotter_dt: must be positive");
    }
    if (times.empty()) {
        throw std::invalid_argument("config.times: must be nonempty");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (!(t >= 0.0)) {
            throw std::invalid_argument("config.times[" + std::to_string(i) +
                                        "]: must be nonnegative");
        }
        const double steps = t / trotter_dt;
        if (std::abs(steps - std::round(steps)) > kTimeGridTol) {
            throw std::invalid_argument("config.times[" + std::to_string(i) +
                                        "]: not divisible by trotter_dt");
        }
    }
    if (subsystems.empty()) {
        throw std::invalid_argument("config.subsystems: must be nonempty");
    }
    const int n_qubits = syk.n_qubits();
    for (std::size_t i = 0; i < subsystems.size(); ++i) {
        const auto& sub = subsystems[i];
        const std::string where = "config.subsystems[" + std::to_string(i) + "]";
        if (sub.empty()) {
            throw std::invalid_argument(where + ": must be nonempty");
        }
        if (static_cast<int>(sub.size()) >= n_qubits) {
            throw std::invalid_argument(where + ": must be a proper subset of the register");
        }
        std::vector<bool> seen(static_cast<std::size_t>(n_qubits), false);
        for (int q : sub) {
            if (q < 0 || q >= n_qubits) {
                throw std::invalid_argument(where + ": qubit out of range");
            }
            if (seen[static_cast<std::size_t>(q)]) {
                throw std::invalid_argument(where + ": duplicate qubit");
            }
            seen[static_cast<std::size_t>(q)] = true;
        }
    }
    if (shots < 1) {
        throw std::invalid_argument("config.shots: must be >= 1");
    }
    if (rm_n_unitaries < 2) {
        throw std::invalid_argument("config.rm.n_unitaries: must be >= 2");
    }
    if (rm_shots_per_unitary < 2) {
        throw std::invalid_argument("config.rm.shots_per_unitary: must be >= 2");
    }
    if (pack_size < 1) {
        throw std::invalid_argument("config.executor.pack_size: must be >= 1");
    }
    if (buffer_qubits < 0) {
        throw std::invalid_argument("config.executor.buffer_qubits: must be >= 0");
    }
    if (worker_count < 1) {
        throw std::invalid_argument("config.executor.worker_count: must be >= 1");
    }
    if (max_trajectories < 1) {
        throw std::invalid_argument("config.executor.max_trajectories: must be >= 1");
    }
    if (noise) {
        try {
            noise->validate();
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string("config.noise: ") + e.what());
        }
    }
    if (mitigation) {
        if (!noise) {
            throw std::invalid_argument("config.mitigation: requires config.noise");
        }
        try {
            mitigation->validate();
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string("config.mitigation: ") + e.what());
        }
    }
}

int ExperimentConfig::steps_for(double t) const {
    const int r = static_cast<int>(std::llround(t / trotter_dt));
    return std::max(r, 1);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }

    ExperimentConfig config;
    if (j.contains("syk")) {
        const json& s = j.at("syk");
        config.syk.n_majorana = s.value("n_majorana", config.syk.n_majorana);
        config.syk.q = s.value("q", config.syk.q);
        config.syk.j_scale = s.value("j_scale", config.syk.j_scale);
        config.syk.seed = s.value("seed", config.syk.seed);
    }
    config.times = j.value("times", config.times);
    config.trotter_dt = j.value("trotter_dt", config.trotter_dt);
    config.subsystems = j.value("subsystems", config.subsystems);
    if (j.contains("protocol")) {
        const std::string p = j.at("protocol").get<std::string>();
        if (p == "swap_mbi") {
            config.protocol = ProtocolChoice::SwapMbi;
        } else if (p == "rm") {
            config.protocol = ProtocolChoice::Rm;
        } else if (p == "both") {
            config.protocol = ProtocolChoice::Both;
        } else {
            throw std::invalid_argument("config.protocol: expected swap_mbi, rm or both");
        }
    }
    config.shots = j.value("shots", config.shots);
    if (j.contains("rm")) {
        const json& r = j.at("rm");
        config.rm_n_unitaries = r.value("n_unitaries", config.rm_n_unitaries);
        config.rm_shots_per_unitary =
            r.value("shots_per_unitary", config.rm_shots_per_unitary);
        config.rm_unbiased = r.value("unbiased", config.rm_unbiased);
    }
    if (j.contains("noise") && !j.at("noise").is_null()) {
        const json& n = j.at("noise");
        NoiseModel model;
        model.two_qubit_depolarizing = n.value("two_qubit_depolarizing", 0.0);
        model.single_qubit_depolarizing = n.value("single_qubit_depolarizing", 0.0);
        model.coherent_zz_overrotation = n.value("coherent_zz_overrotation", 0.0);
        if (n.contains("readout_flip")) {
            for (const json& pair : n.at("readout_flip")) {
                model.readout_flip.push_back(
                    {pair.at(0).get<double>(), pair.at(1).get<double>()});
            }
        }
        config.noise = std::move(model);
    }
    if (j.contains("mitigation") && !j.at("mitigation").is_null()) {
        const json& m = j.at("mitigation");
        MitigationConfig mit;
        mit.zne_factors = m.value("zne_factors", mit.zne_factors);
        if (m.contains("zne_fit")) {
            const std::string fit = m.at("zne_fit").get<std::string>();
            if (fit == "linear") {
                mit.zne_fit = ZneFit::Linear;
            } else if (fit == "exponential") {
                mit.zne_fit = ZneFit::Exponential;
            } else {
                throw std::invalid_argument(
                    "config.mitigation.zne_fit: expected linear or exponential");
            }
        }
        mit.pauli_twirls = m.value("pauli_twirls", mit.pauli_twirls);
        mit.readout_mitigation = m.value("readout_mitigation", mit.readout_mitigation);
        config.mitigation = std::move(mit);
    }
    if (j.contains("executor")) {
        const json& e = j.at("executor");
        config.pack_size = e.value("pack_size", config.pack_size);
        config.buffer_qubits = e.value("buffer_qubits", config.buffer_qubits);
        config.worker_count = e.value("worker_count", config.worker_count);
        config.max_trajectories = e.value("max_trajectories", config.max_trajectories);
    }
    config.output_dir = j.value("output_dir", config.output_dir);
    config.master_seed = j.value("master_seed", config.master_seed);
    config.log_base_2 = j.value("log_base_2", config.log_base_2);

    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["syk"] = {{"n_majorana", syk.n_majorana},
                {"q", syk.q},
                {"j_scale", syk.j_scale},
                {"seed", syk.seed}};
    j["times"] = times;
    j["trotter_dt"] = trotter_dt;
    j["subsystems"] = subsystems;
    switch (protocol) {
    case ProtocolChoice::SwapMbi:
        j["protocol"] = "swap_mbi";
        break;
    case ProtocolChoice::Rm:
        j["protocol"] = "rm";
        break;
    case ProtocolChoice::Both:
        j["protocol"] = "both";
        break;
    }
    j["shots"] = shots;
    j["rm"] = {{"n_unitaries", rm_n_unitaries},
               {"shots_per_unitary", rm_shots_per_unitary},
               {"unbiased", rm_unbiased}};
    if (noise) {
        json n;
        n["two_qubit_depolarizing"] = noise->two_qubit_depolarizing;
        n["single_qubit_depolarizing"] = noise->single_qubit_depolarizing;
        n["coherent_zz_overrotation"] = noise->coherent_zz_overrotation;
        json flips = json::array();
        for (const ReadoutFlip& f : noise->readout_flip) {
            flips.push_back(json::array({f.p01, f.p10}));
        }
        n["readout_flip"] = std::move(flips);
        j["noise"] = std::move(n);
    } else {
        j["noise"] = nullptr;
    }
    if (mitigation) {
        j["mitigation"] = {
            {"zne_factors", mitigation->zne_factors},
            {"zne_fit", mitigation->zne_fit == ZneFit::Linear ? "linear" : "exponential"},
            {"pauli_twirls", mitigation->pauli_twirls},
            {"readout_mitigation", mitigation->readout_mitigation}};
    } else {
        j["mitigation"] = nullptr;
    }
    j["executor"] = {{"pack_size", pack_size},
                     {"buffer_qubits", buffer_qubits},
                     {"worker_count", worker_count},
                     {"max_trajectories", max_trajectories}};
    j["output_dir"] = output_dir;
    j["master_seed"] = master_seed;
    j["log_base_2"] = log_base_2;
    return j.dump(2);
}

Circuit decompose_to_basis(const Circuit& circuit) {
    Circuit out(circuit.n_qubits());
    for (const Gate& g : circuit.gates()) {
        switch (g.kind) {
        case GateKind::ControlledSwap:
            // cswap(c; a, b) = cx(b,a) ccx(c, a -> b) cx(b,a).
            out.append(Gate::cx(g.target2, g.target));
            append_ccx(out, g.control, g.target, g.target2);
            out.append(Gate::cx(g.target2, g.target));
            break;
        case GateKind::PauliRotation:
            throw std::invalid_argument("decompose_to_basis: native rotations must be "
                                        "expanded by the Trotter builder");
        default:
            out.append(g);
            break;
        }
    }
    return out;
}

std::uint64_t rm_circuits_per_time_point(const ExperimentConfig& config) {
    std::uint64_t per_point = config.rm_n_unitaries;
    if (config.mitigation) {
        per_point *= config.mitigation->zne_factors.size();
        per_point *= static_cast<std::uint64_t>(config.mitigation->pauli_twirls);
    }
    return per_point;
}

std::vector<OracleRow> compute_oracle_curves(const ExperimentConfig& config) {
    config.validate();
    const SykHamiltonian h = build_hamiltonian(config.syk);

    std::vector<OracleRow> rows;
    for (double t : config.times) {
        const int r = config.steps_for(t);
        const TrotterPlan plan = TrotterPlan::make(h, t, r);
        const Statevector initial(h.n_qubits);
        const Statevector psi_exact = exact_evolve(h, initial, t);
        const Statevector psi_trotter = build_trotter_circuit(plan, false).final_state();

        for (const auto& subsystem : config.subsystems) {
            OracleRow row;
            row.t = t;
            row.subsystem = subsystem;
            const DensityMatrix rho_exact = reduced_density_matrix(psi_exact, subsystem);
            const DensityMatrix rho_trotter = reduced_density_matrix(psi_trotter, subsystem);
            row.purity_exact = purity(rho_exact);
            row.purity_exact_trotter = purity(rho_trotter);
            row.s2_exact = renyi_entropy(rho_exact, 2);
            row.s2_exact_trotter = renyi_entropy(rho_trotter, 2);
            row.svn_exact = von_neumann_entropy(rho_exact);
            row.svn_exact_trotter = von_neumann_entropy(rho_trotter);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<TrotterCountRow> compute_gate_counts(const ExperimentConfig& config) {
    config.validate();
    const SykHamiltonian h = build_hamiltonian(config.syk);
    std::vector<TrotterCountRow> rows;
    for (double t : config.times) {
        TrotterCountRow row;
        row.t = t;
        row.r = config.steps_for(t);
        row.report = trotter_gate_report(TrotterPlan::make(h, t, row.r));
        rows.push_back(std::move(row));
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const SykHamiltonian h = build_hamiltonian(config.syk);

    const StatevectorBackend ideal;
    std::optional<NoisyBackend> noisy;
    if (config.noise) {
        noisy.emplace(*config.noise, config.max_trajectories);
    }

    ExperimentResult out;
    out.config = config;
    out.oracle_rows = compute_oracle_curves(config);
    out.gate_counts = compute_gate_counts(config);

    const bool want_swap = config.protocol != ProtocolChoice::Rm;
    const bool want_rm = config.protocol != ProtocolChoice::SwapMbi;

    for (std::size_t ti = 0; ti < config.times.size(); ++ti) {
        const double t = config.times[ti];
        const int r = config.steps_for(t);
        const TrotterPlan plan = TrotterPlan::make(h, t, r);
        const Circuit base_native = build_trotter_circuit(plan, false);
        const Circuit base_decomposed = build_trotter_circuit(plan, true);
        const Statevector psi_trotter = base_native.final_state();
        const Statevector psi_exact = exact_evolve(h, Statevector(h.n_qubits), t);

        for (std::size_t si = 0; si < config.subsystems.size(); ++si) {
            CellContext ctx;
            ctx.config = &config;
            ctx.t = t;
            ctx.time_index = ti;
            ctx.subsystem = config.subsystems[si];
            ctx.subsystem_index = si;
            ctx.base_native = &base_native;
            ctx.base_decomposed = &base_decomposed;
            ctx.s2_exact = exact_renyi2(psi_exact, ctx.subsystem);
            ctx.s2_exact_trotter = exact_renyi2(psi_trotter, ctx.subsystem);

            if (want_swap) {
                const Circuit swap_native = build_swap_test_circuit(
                    {base_native, ctx.subsystem, config.shots});
                out.rows.push_back(
                    swap_cell_sampled(ctx, swap_native, ideal, "none", "ideal"));
                if (noisy) {
                    const Circuit swap_basis = decompose_to_basis(build_swap_test_circuit(
                        {base_decomposed, ctx.subsystem, config.shots}));
                    out.rows.push_back(swap_cell_sampled(ctx, swap_basis, *noisy,
                                                         noisy->model().label(), "noisy"));
                    if (config.mitigation) {
                        MitigatedSwap mit = swap_cell_mitigated(ctx, swap_basis, *noisy);
                        out.rows.push_back(std::move(mit.row));
                        out.mitigation_details.push_back(std::move(mit.detail));
                    }
                }
            }
            if (want_rm) {
                out.rows.push_back(rm_cell_sampled(ctx, base_native, ideal, "none", "ideal"));
                if (noisy) {
                    out.rows.push_back(rm_cell_sampled(ctx, base_decomposed, *noisy,
                                                       noisy->model().label(), "noisy"));
                    if (config.mitigation) {
                        MitigatedRm mit = rm_cell_mitigated(ctx, base_decomposed, *noisy);
                        out.rows.push_back(std::move(mit.row));
                        out.mitigation_details.push_back(std::move(mit.detail));
                    }
                }
            }
        }
    }
    return out;
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_results: cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("emit_results: write failed for " + path.string());
    }
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

void emit_results(const ExperimentResult& result, const std::filesystem::path& output_dir) {
    if (result.rows.empty() && result.oracle_rows.empty()) {
        throw std::invalid_argument("emit_results: empty result set");
    }
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) {
        throw std::runtime_error("emit_results: cannot create " + output_dir.string() + ": " +
                                 ec.message());
    }
    const double scale = result.config.log_base_2 ? 1.0 / kLn2 : 1.0;

    {
        std::ostringstream csv;
        csv << "t,L,protocol,purity,S2,std_error,S2_exact,S2_exact_trotter,n_unitaries,"
               "shots,noise_label,mitigation_label\n";
        for (const ResultRow& row : result.rows) {
            csv << format_double(row.t) << "," << row.subsystem.size() << "," << row.protocol
                << "," << format_double(row.purity) << "," << format_double(row.s2 * scale)
                << "," << format_double(row.std_error * scale) << ","
                << format_double(row.s2_exact * scale) << ","
                << format_double(row.s2_exact_trotter * scale) << "," << row.n_unitaries
                << "," << row.shots << "," << row.noise_label << "," << row.mitigation_label
                << "\n";
        }
        write_text_file(output_dir / "results.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "t,L,purity_exact,purity_exact_trotter,S2_exact,S2_exact_trotter,SvN_exact,"
               "SvN_exact_trotter\n";
        for (const OracleRow& row : result.oracle_rows) {
            csv << format_double(row.t) << "," << row.subsystem.size() << ","
                << format_double(row.purity_exact) << ","
                << format_double(row.purity_exact_trotter) << ","
                << format_double(row.s2_exact * scale) << ","
                << format_double(row.s2_exact_trotter * scale) << ","
                << format_double(row.svn_exact * scale) << ","
                << format_double(row.svn_exact_trotter * scale) << "\n";
        }
        write_text_file(output_dir / "oracle.csv", csv.str());
    }
    {
        json counts = json::array();
        for (const TrotterCountRow& row : result.gate_counts) {
            counts.push_back({{"t", row.t},
                              {"r", row.r},
                              {"depth", row.report.depth},
                              {"two_qubit_gates", row.report.two_qubit_gates},
                              {"single_qubit_gates", row.report.single_qubit_gates},
                              {"other_gates", row.report.other_gates},
                              {"per_step_depth", row.report.per_step_depth}});
        }
        write_text_file(output_dir / "gate_counts.json", counts.dump(2) + "\n");
    }
    write_text_file(output_dir / "config_resolved.json", result.config.to_json_text() + "\n");
    if (!result.mitigation_details.empty()) {
        json details = json::array();
        for (const MitigationDetail& d : result.mitigation_details) {
            json per_factor = json::array();
            for (const auto& [factor, value] : d.per_factor) {
                per_factor.push_back(json::array({factor, value}));
            }
            details.push_back({{"t", d.t},
                               {"L", d.subsystem.size()},
                               {"protocol", d.protocol},
                               {"raw", d.raw_value},
                               {"per_factor", std::move(per_factor)},
                               {"extrapolated", d.extrapolated},
                               {"fit_fell_back", d.fit_fell_back}});
        }
        write_text_file(output_dir / "mitigation_detail.json", details.dump(2) + "\n");
    }
}

} // namespace syksim
