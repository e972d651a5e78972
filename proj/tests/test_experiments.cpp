#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "swaptest/experiments.hpp"

using namespace swaptest;

namespace {

ExperimentConfig small_size_config() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::SizeQuadratic;
    cfg.replicates = 12;
    cfg.n = 100;
    cfg.d = 4;
    cfg.alphas = {0.2};
    cfg.root_seed = 99;
    return cfg;
}

}  // namespace

TEST_CASE("experiment config parses from JSON and validates") {
    const auto j = nlohmann::json::parse(R"({
        "experiment": "size-quadratic",
        "replicates": 10, "n": 50, "d": 3,
        "alphas": [0.1, 0.2],
        "root_seed": 7
    })");
    const auto cfg = ExperimentConfig::from_json(j);
    CHECK(cfg.kind == ExperimentKind::SizeQuadratic);
    CHECK(cfg.replicates == 10);
    CHECK(cfg.alphas.size() == 2);

    auto bad = j;
    bad["experiment"] = "no-such-kind";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);
    auto missing = j;
    missing.erase("alphas");
    CHECK_THROWS_AS(ExperimentConfig::from_json(missing), std::invalid_argument);

    CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({
        "experiment": "power-gmm", "replicates": 5, "root_seed": 1,
        "ns": [100, 50], "mu": [0.1, 0.2], "q": 0.5
    })")),
                    std::invalid_argument);
}

TEST_CASE("config vector fields accept single-column CSV paths") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "swaptest_exp_theta.csv";
    std::ofstream(path) << "1\n5\n";
    nlohmann::json j{{"experiment", "power-linear-grid"}, {"replicates", 3},
                     {"n", 50},          {"theta_star", path.string()},
                     {"estimate_sigmas", {1.0}},          {"alpha", 0.1},
                     {"root_seed", 2}};
    const auto cfg = ExperimentConfig::from_json(j);
    CHECK(cfg.theta_star == std::vector<double>{1.0, 5.0});
    fs::remove(path);
}

TEST_CASE("worker count never changes experiment results") {
    auto cfg = small_size_config();
    cfg.workers = 1;
    const auto serial = run_experiment(cfg);
    cfg.workers = 3;
    const auto parallel = run_experiment(cfg);
    REQUIRE(serial.matrices.size() == parallel.matrices.size());
    for (std::size_t k = 0; k < serial.matrices.size(); ++k) {
        CHECK(serial.matrices[k].rates == parallel.matrices[k].rates);
    }
    CHECK(serial.summary.dump() == parallel.summary.dump());
}

TEST_CASE("rejection matrices are symmetric with entries in [0,1]") {
    auto cfg = small_size_config();
    const auto result = run_experiment(cfg);
    REQUIRE(result.matrices.size() == 1);
    const auto& m = result.matrices[0];
    REQUIRE(m.d == 4);
    for (std::size_t i = 0; i < m.d; ++i) {
        for (std::size_t j = 0; j < m.d; ++j) {
            CHECK(m.at(i, j) >= 0.0);
            CHECK(m.at(i, j) <= 1.0);
            CHECK(m.at(i, j) == m.at(j, i));
        }
    }
    CHECK(result.summary.at("diagonal_degenerate").get<bool>());
    CHECK(result.summary.at("config").at("root_seed").get<std::uint64_t>() == 99);
}

TEST_CASE("power-linear-grid produces one matrix per estimate sigma") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::PowerLinearGrid;
    cfg.replicates = 15;
    cfg.n = 200;
    cfg.theta_star = {1.0, 5.0};
    cfg.estimate_sigmas = {0.5, 2.0};
    cfg.alpha = 0.1;
    cfg.root_seed = 5;
    const auto result = run_experiment(cfg);
    REQUIRE(result.matrices.size() == 2);
    // strong contrast + decent estimates: the (1,2) cell should show power
    CHECK(result.matrices[0].at(0, 1) > 0.5);
}

TEST_CASE("power-gmm produces one matrix per sample count") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::PowerGmm;
    cfg.replicates = 8;
    cfg.ns = {100, 400};
    cfg.mu = {0.0, 1.5};
    cfg.q = 0.5;
    cfg.alpha = 0.1;
    cfg.root_seed = 6;
    const auto result = run_experiment(cfg);
    REQUIRE(result.matrices.size() == 2);
    CHECK(result.matrices[0].n == 100);
    CHECK(result.matrices[1].n == 400);
}

TEST_CASE("pvalue-uniformity reports rates for each alpha") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::PvalueUniformity;
    cfg.replicates = 40;
    cfg.n = 100;
    cfg.d = 3;
    cfg.alphas = {0.1, 0.5};
    cfg.root_seed = 8;
    const auto result = run_experiment(cfg);
    const auto& rates = result.summary.at("empirical_p_at_most_alpha");
    REQUIRE(rates.size() == 2);
    for (const auto& [key, value] : rates.items()) {
        CHECK(value.get<double>() >= 0.0);
        CHECK(value.get<double>() <= 1.0);
    }
}

TEST_CASE("datamodel-synthetic summarizes null and alternative rates") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::DatamodelSynthetic;
    cfg.replicates = 15;
    cfg.n = 400;
    cfg.d = 4;
    cfg.ones = 2;
    cfg.weights = {1.0, 1.0, 5.0, 5.0};
    cfg.estimate_sigma = 0.5;
    cfg.alpha = 0.1;
    cfg.root_seed = 12;
    const auto result = run_experiment(cfg);
    CHECK(result.summary.at("null_pairs_one_based").size() == 2);  // (1,2) and (3,4)
    CHECK(result.summary.at("shift_bound").at("value").get<double>() == 0.0);
}

TEST_CASE("artifacts land on disk with provenance embedded") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "swaptest_artifact_test";
    fs::remove_all(dir);
    auto cfg = small_size_config();
    const auto result = run_experiment(cfg);
    const auto written = write_artifacts(result, dir.string());
    REQUIRE(written.size() == 2);  // one matrix CSV + summary

    std::ifstream summary_in(dir / "size-quadratic_summary.json");
    REQUIRE(summary_in.good());
    const auto summary = nlohmann::json::parse(summary_in);
    CHECK(summary.at("config").at("experiment") == "size-quadratic");
    CHECK(summary.at("config").at("root_seed").get<std::uint64_t>() == 99);
    CHECK(summary.at("artifact_files").size() == 1);

    std::ifstream csv_in(dir / "size-quadratic_rates_alpha0.2.csv");
    REQUIRE(csv_in.good());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv_in, line)) ++rows;
    CHECK(rows == 4);
    fs::remove_all(dir);
}
