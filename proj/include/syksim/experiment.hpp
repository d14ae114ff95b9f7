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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "syksim/noise.hpp"
#include "syksim/protocols.hpp"
#include "syksim/syk.hpp"
#include "syksim/trotter.hpp"

namespace syksim {

enum class ProtocolChoice { SwapMbi, Rm, Both };

/// Full experiment description. Defaults reproduce the reference run shape:
/// N=6 Majoranas, q=4, times 2..10 at dt=2, left subsystems {0} and {0,1},
/// 150 randomized-measurement unitaries, ZNE x3 and 10 twirls when
/// mitigation is enabled, packing 5 circuits per package.
struct ExperimentConfig {
    SykParams syk{6, 4, 1.0, 42};
    std::vector<double> times{2, 4, 6, 8, 10};
    double trotter_dt = 2.0;
    std::vector<std::vector<int>> subsystems{{0}, {0, 1}};
    ProtocolChoice protocol = ProtocolChoice::Both;
    std::uint64_t shots = 100000;
    std::uint64_t rm_n_unitaries = 150;
    std::uint64_t rm_shots_per_unitary = 1024;
    bool rm_unbiased = false;
    std::optional<NoiseModel> noise;
    std::optional<MitigationConfig> mitigation;
    int pack_size = 5;
    int buffer_qubits = 1;
    int worker_count = 2;
    std::uint64_t max_trajectories = 4096;
    std::string output_dir = "results";
    std::uint64_t master_seed = 1;
    bool log_base_2 = false;

    void validate() const;
    int steps_for(double t) const;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    std::string to_json_text() const;
};

/// One measured table cell; S2 values are natural-log based in memory and
/// converted on emission when log_base_2 is set. Undefined entropies are
/// NaN with entropy_defined false.
struct ResultRow {
    double t = 0.0;
    std::vector<int> subsystem;
    std::string protocol;
    double purity = 0.0;
    double s2 = 0.0;
    double std_error = 0.0;
    double s2_exact = 0.0;
    double s2_exact_trotter = 0.0;
    std::uint64_t n_unitaries = 0;
    std::uint64_t shots = 0;
    std::string noise_label = "none";
    std::string mitigation_label = "none";
    bool entropy_defined = true;
};

struct OracleRow {
    double t = 0.0;
    std::vector<int> subsystem;
    double purity_exact = 0.0;
    double purity_exact_trotter = 0.0;
    double s2_exact = 0.0;
    double s2_exact_trotter = 0.0;
    double svn_exact = 0.0;
    double svn_exact_trotter = 0.0;
};

struct TrotterCountRow {
    double t = 0.0;
    int r = 0;
    GateCountReport report;
};

/// Per-stage mitigation values kept for auditability.
struct MitigationDetail {
    double t = 0.0;
    std::vector<int> subsystem;
    std::string protocol;
    double raw_value = 0.0; // factor-1 twirl-averaged purity
    std::vector<std::pair<double, double>> per_factor;
    double extrapolated = 0.0;
    bool fit_fell_back = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ResultRow> rows;
    std::vector<OracleRow> oracle_rows;
    std::vector<TrotterCountRow> gate_counts;
    std::vector<MitigationDetail> mitigation_details;
};

/// Runs the configured sweep: per time point builds the Trotter circuit,
/// computes exact and exact-Trotterized reference entropies, and runs the
/// selected protocols per subsystem, noiseless plus (when configured) raw
/// noisy and mitigated, all through the batch executor.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Exact curves only (no sampling).
std::vector<OracleRow> compute_oracle_curves(const ExperimentConfig& config);

/// Gate accounting only.
std::vector<TrotterCountRow> compute_gate_counts(const ExperimentConfig& config);

/// Writes results.csv, oracle.csv, gate_counts.json, config_resolved.json
/// and (when present) mitigation_detail.json under output_dir. Output is a
/// pure function of the result set.
void emit_results(const ExperimentResult& result, const std::filesystem::path& output_dir);

/// Circuits submitted per time point for the randomized-measurement
/// protocol under the configured mitigation (n_unitaries x zne x twirls).
std::uint64_t rm_circuits_per_time_point(const ExperimentConfig& config);

/// Expands controlled swaps into the CX/T/H basis; other basis gates pass
/// through. Throws on native multi-qubit rotations.
Circuit decompose_to_basis(const Circuit& circuit);

} // namespace syksim
