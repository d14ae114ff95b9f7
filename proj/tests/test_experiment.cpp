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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "syksim/exact.hpp"
#include "syksim/experiment.hpp"

#include "oracle_util.hpp"

using namespace syksim;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.syk.seed = 7;
    config.times = {2.0, 4.0};
    config.subsystems = {{0}};
    config.shots = 4000;
    config.rm_n_unitaries = 24;
    config.rm_shots_per_unitary = 256;
    config.worker_count = 2;
    config.master_seed = 11;
    return config;
}

} // namespace

TEST_CASE("defaults reproduce the reference run shape") {
    const ExperimentConfig config;
    CHECK(config.times == std::vector<double>{2, 4, 6, 8, 10});
    CHECK(config.trotter_dt == 2.0);
    CHECK(config.subsystems == std::vector<std::vector<int>>{{0}, {0, 1}});
    CHECK(config.rm_n_unitaries == 150);
    CHECK(config.pack_size == 5);
    for (std::size_t i = 0; i < config.times.size(); ++i) {
        CHECK(config.steps_for(config.times[i]) == static_cast<int>(i) + 1);
    }
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config JSON round-trips and validates") {
    ExperimentConfig config = small_config();
    NoiseModel model;
    model.two_qubit_depolarizing = 0.005;
    model.coherent_zz_overrotation = 0.02;
    model.readout_flip = {{0.01, 0.02}};
    config.noise = model;
    config.mitigation = MitigationConfig{};

    const ExperimentConfig reloaded = ExperimentConfig::from_json_text(config.to_json_text());
    CHECK(reloaded.to_json_text() == config.to_json_text());
    CHECK(reloaded.times == config.times);
    CHECK(reloaded.noise->two_qubit_depolarizing == 0.005);
    CHECK(reloaded.mitigation->pauli_twirls == 10);
}

TEST_CASE("config validation messages carry the field path") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text(R"({"times": [3.0]})"),
                         doctest::Contains("config.times[0]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text(R"({"subsystems": [[0,1,2]]})"),
                         doctest::Contains("config.subsystems[0]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text(R"({"protocol": "bogus"})"),
                         doctest::Contains("config.protocol"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text("{"),
                         doctest::Contains("parse error"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json_text(R"({"mitigation": {}})"),
                         doctest::Contains("requires config.noise"), std::invalid_argument);
}

TEST_CASE("campaign accounting matches the reference arithmetic") {
    ExperimentConfig config;
    NoiseModel model;
    model.two_qubit_depolarizing = 0.005;
    config.noise = model;
    config.mitigation = MitigationConfig{};
    CHECK(rm_circuits_per_time_point(config) == 4500);
    config.mitigation.reset();
    CHECK(rm_circuits_per_time_point(config) == 150);
}

TEST_CASE("cswap decomposition matches the dense oracle") {
    Circuit circuit(3);
    circuit.append(Gate::hadamard(0));
    circuit.append(Gate::unitary(kTGate, 1, "t"));
    circuit.append(Gate::hadamard(2));
    circuit.append(Gate::cswap(2, 0, 1));
    const Circuit decomposed = decompose_to_basis(circuit);
    for (const Gate& g : decomposed.gates()) {
        CHECK(g.kind != GateKind::ControlledSwap);
    }
    const Eigen::MatrixXcd expected = testing::circuit_to_dense(circuit);
    const Eigen::MatrixXcd actual = testing::circuit_to_dense(decomposed);
    CHECK((expected - actual).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("oracle curves: t = 0 product state has zero entropy") {
    ExperimentConfig config = small_config();
    config.times = {0.0, 2.0};
    const std::vector<OracleRow> rows = compute_oracle_curves(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].t == 0.0);
    CHECK(rows[0].s2_exact == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rows[0].purity_exact == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rows[1].s2_exact > 0.01);
}

TEST_CASE("gate counts are emitted per time point") {
    const std::vector<TrotterCountRow> rows = compute_gate_counts(small_config());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].r == 1);
    CHECK(rows[1].r == 2);
    CHECK(rows[1].report.two_qubit_gates == 2 * rows[0].report.two_qubit_gates);
}

TEST_CASE("noiseless experiment rows and oracle columns") {
    const ExperimentConfig config = small_config();
    const ExperimentResult result = run_experiment(config);

    // times x subsystems x protocols x 1 noise setting.
    CHECK(result.rows.size() == 2 * 1 * 2);
    for (const ResultRow& row : result.rows) {
        CHECK(row.noise_label == "none");
        CHECK(row.mitigation_label == "none");
        // Noiseless estimates track the exact-Trotterized reference.
        if (row.entropy_defined) {
            CHECK(std::abs(row.s2 - row.s2_exact_trotter) <
                  4.0 * row.std_error + 0.05);
        }
    }

    // Exact columns present and consistent with the standalone oracle.
    const std::vector<OracleRow> oracle = compute_oracle_curves(config);
    REQUIRE(result.oracle_rows.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        CHECK(result.oracle_rows[i].s2_exact ==
              doctest::Approx(oracle[i].s2_exact).epsilon(1e-12));
    }
}

TEST_CASE("experiment output is deterministic and complete") {
    const ExperimentConfig config = small_config();
    const ExperimentResult result = run_experiment(config);

    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "syksim_emit_test";
    std::filesystem::remove_all(dir);
    emit_results(result, dir);

    const std::string csv = slurp(dir / "results.csv");
    CHECK(csv.find("t,L,protocol,purity,S2,std_error,S2_exact,S2_exact_trotter,"
                   "n_unitaries,shots,noise_label,mitigation_label") == 0);
    // Header plus one line per row.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + result.rows.size());

    CHECK(std::filesystem::exists(dir / "oracle.csv"));
    CHECK(std::filesystem::exists(dir / "gate_counts.json"));
    CHECK(std::filesystem::exists(dir / "config_resolved.json"));

    // Byte-identical on rerun.
    const ExperimentResult again = run_experiment(config);
    const std::filesystem::path dir2 =
        std::filesystem::temp_directory_path() / "syksim_emit_test2";
    std::filesystem::remove_all(dir2);
    emit_results(again, dir2);
    CHECK(slurp(dir / "results.csv") == slurp(dir2 / "results.csv"));
    CHECK(slurp(dir / "oracle.csv") == slurp(dir2 / "oracle.csv"));
    CHECK(slurp(dir / "config_resolved.json") == slurp(dir2 / "config_resolved.json"));

    // Resolved config re-reads into the same experiment plan.
    const ExperimentConfig reread =
        ExperimentConfig::from_json_text(slurp(dir / "config_resolved.json"));
    CHECK(reread.to_json_text() == config.to_json_text());

    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("noisy and mitigated settings add rows and details") {
    ExperimentConfig config = small_config();
    config.times = {2.0};
    config.protocol = ProtocolChoice::SwapMbi;
    config.shots = 2000;
    config.max_trajectories = 256;
    NoiseModel model;
    model.two_qubit_depolarizing = 0.01;
    model.readout_flip = {{0.02, 0.02}};
    config.noise = model;
    MitigationConfig mit;
    mit.pauli_twirls = 4;
    config.mitigation = mit;

    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.rows.size() == 3); // ideal, noisy, mitigated
    CHECK(result.rows[0].noise_label == "none");
    CHECK(result.rows[1].noise_label != "none");
    CHECK(result.rows[1].mitigation_label == "none");
    CHECK(result.rows[2].mitigation_label != "none");
    REQUIRE(result.mitigation_details.size() == 1);
    CHECK(result.mitigation_details[0].per_factor.size() == 3);

    // The emitted S2 invariant: finite std_error implies S2 > -3 sigma.
    for (const ResultRow& row : result.rows) {
        if (row.entropy_defined) {
            CHECK(row.s2 >= -3.0 * row.std_error);
        }
    }
}

TEST_CASE("mitigated RM path extrapolates per unitary") {
    ExperimentConfig config = small_config();
    config.times = {2.0};
    config.protocol = ProtocolChoice::Rm;
    config.rm_n_unitaries = 8;
    config.rm_shots_per_unitary = 128;
    config.max_trajectories = 128;
    NoiseModel model;
    model.two_qubit_depolarizing = 0.01;
    model.readout_flip = {{0.02, 0.01}};
    config.noise = model;
    MitigationConfig mit;
    mit.zne_factors = {1, 3};
    mit.pauli_twirls = 2;
    config.mitigation = mit;

    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.rows.size() == 3);
    CHECK(result.rows[2].protocol == "rm");
    CHECK(result.rows[2].mitigation_label != "none");
    CHECK(result.rows[2].n_unitaries == 8);
    REQUIRE(result.mitigation_details.size() == 1);
    CHECK(result.mitigation_details[0].per_factor.size() == 2);
    CHECK(std::isfinite(result.mitigation_details[0].extrapolated));

    // Deterministic rerun.
    const ExperimentResult again = run_experiment(config);
    CHECK(again.rows[2].purity == result.rows[2].purity);
    CHECK(again.rows[2].s2 == result.rows[2].s2);
}

TEST_CASE("log base 2 rescales emitted entropies") {
    ExperimentConfig config = small_config();
    const ExperimentResult natural = run_experiment(config);
    ExperimentResult rescaled = natural;
    rescaled.config.log_base_2 = true;

    const std::filesystem::path dir_a =
        std::filesystem::temp_directory_path() / "syksim_log_a";
    const std::filesystem::path dir_b =
        std::filesystem::temp_directory_path() / "syksim_log_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    emit_results(natural, dir_a);
    emit_results(rescaled, dir_b);

    // Parse the S2_exact column of the first data line from both.
    auto s2_exact_of = [](const std::string& csv) {
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line); // header
        std::getline(lines, line);
        std::istringstream fields(line);
        std::string field;
        for (int i = 0; i <= 6; ++i) {
            std::getline(fields, field, ',');
        }
        return std::stod(field);
    };
    const double nat = s2_exact_of(slurp(dir_a / "results.csv"));
    const double bits = s2_exact_of(slurp(dir_b / "results.csv"));
    CHECK(bits == doctest::Approx(nat / std::log(2.0)).epsilon(1e-9));

    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}
