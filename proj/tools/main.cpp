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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "syksim/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<int> workers;
    bool log2 = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "override master_seed");
    cmd->add_option("--output-dir", opts.output_dir, "override output_dir");
    cmd->add_option("--workers", opts.workers, "override executor worker count");
    cmd->add_flag("--log2", opts.log2, "report entropies in base 2");
}

syksim::ExperimentConfig load_config(const CommonOptions& opts) {
    syksim::ExperimentConfig config = syksim::ExperimentConfig::from_file(opts.config_path);
    if (opts.seed) {
        config.master_seed = *opts.seed;
    }
    if (opts.output_dir) {
        config.output_dir = *opts.output_dir;
    }
    if (opts.workers) {
        config.worker_count = *opts.workers;
    }
    if (opts.log2) {
        config.log_base_2 = true;
    }
    config.validate();
    return config;
}

int cmd_run(const CommonOptions& opts) {
    const syksim::ExperimentConfig config = load_config(opts);
    const syksim::ExperimentResult result = syksim::run_experiment(config);
    syksim::emit_results(result, config.output_dir);
    std::cout << "wrote " << result.rows.size() << " result rows to " << config.output_dir
              << "\n";
    return kExitOk;
}

int cmd_oracle(const CommonOptions& opts) {
    const syksim::ExperimentConfig config = load_config(opts);
    syksim::ExperimentResult result;
    result.config = config;
    result.oracle_rows = syksim::compute_oracle_curves(config);
    result.gate_counts = syksim::compute_gate_counts(config);
    syksim::emit_results(result, config.output_dir);
    std::cout << "wrote " << result.oracle_rows.size() << " oracle rows to "
              << config.output_dir << "\n";
    return kExitOk;
}

int cmd_counts(const CommonOptions& opts) {
    const syksim::ExperimentConfig config = load_config(opts);
    const auto rows = syksim::compute_gate_counts(config);
    std::cout << "t,r,depth,two_qubit_gates,single_qubit_gates,per_step_depth\n";
    for (const auto& row : rows) {
        std::cout << row.t << "," << row.r << "," << row.report.depth << ","
                  << row.report.two_qubit_gates << "," << row.report.single_qubit_gates << ","
                  << row.report.per_step_depth << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SYK entanglement-entropy growth simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CommonOptions oracle_opts;
    CommonOptions counts_opts;
    CLI::App* run = app.add_subcommand("run", "run the full measurement pipeline");
    add_common(run, run_opts);
    CLI::App* oracle = app.add_subcommand("oracle", "exact reference curves only");
    add_common(oracle, oracle_opts);
    CLI::App* counts = app.add_subcommand("counts", "gate-count report only");
    add_common(counts, counts_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) {
            return cmd_run(run_opts);
        }
        if (oracle->parsed()) {
            return cmd_oracle(oracle_opts);
        }
        return cmd_counts(counts_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
