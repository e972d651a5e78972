#pragma once

// Command-line front end. Subcommands:
//   test        run the swap test on a CSV dataset for one feature pair
//   simulate    emit a synthetic dataset in the core CSV schema
//   power       detectability calculators (closed forms + optional MC)
//   multitest   Benjamini-Yekutieli step-up over an (id,p) CSV
//   experiment  run a JSON-configured experiment and write artifacts
// Feature indices are 1-based on the command line, 0-based internally.
// Results print as JSON on stdout; errors exit nonzero with a message on
// stderr. `test` exits 0 whether or not the null is rejected.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swaptest/experiments.hpp"
#include "swaptest/multiplicity.hpp"
#include "swaptest/power.hpp"
#include "swaptest/shift_bounds.hpp"
#include "swaptest/simgen.hpp"
#include "swaptest/test_engine.hpp"

namespace swaptest::cli {

namespace detail {

inline std::vector<double> load_vector(const std::string& arg) {
    return load_coefficients(arg);
}

inline ScoreKind score_kind_from_string(const std::string& s) {
    if (s == "linear-residual") return ScoreKind::LinearResidual;
    if (s == "classification-margin") return ScoreKind::ClassificationMargin;
    if (s == "squared-residual") return ScoreKind::SquaredResidual;
    throw std::runtime_error("unknown score '" + s +
                             "' (expected linear-residual, classification-margin or "
                             "squared-residual)");
}

inline FeaturePair pair_from_cli(long long i, long long j, std::size_t d) {
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > d || static_cast<std::size_t>(j) > d) {
        throw std::runtime_error("feature indices are 1-based and must lie in [1, " +
                                 std::to_string(d) + "]");
    }
    return FeaturePair{static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
}

inline std::vector<PvalueEntry> read_pvalue_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<PvalueEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("p-value CSV line " + std::to_string(line_no) +
                                     ": expected 'id,p'");
        }
        const std::string id = line.substr(0, comma);
        const std::string pfield = line.substr(comma + 1);
        try {
            std::size_t pos = 0;
            const double p = std::stod(pfield, &pos);
            if (pos != pfield.size()) throw std::invalid_argument("trailing garbage");
            entries.push_back({id, p});
        } catch (const std::exception&) {
            if (line_no == 1 && entries.empty()) continue;  // header
            throw std::runtime_error("p-value CSV line " + std::to_string(line_no) + ": '" +
                                     pfield + "' is not a number");
        }
    }
    if (entries.empty()) throw std::runtime_error("p-value CSV '" + path + "' has no entries");
    return entries;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model-free closeness-of-influence testing for feature pairs"};
    app.require_subcommand(1);

    // ---- test ------------------------------------------------------------
    auto* cmd_test = app.add_subcommand("test", "Run the swap test on a CSV dataset");
    std::string test_csv;
    long long opt_i = 0, opt_j = 0;
    std::string score_name = "linear-residual";
    std::string theta_hat_arg;
    double tau = 0.0, tau_x = 0.0, alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> shuffle_seed;
    std::string gaussian_spec_path;
    cmd_test->add_option("data", test_csv, "Dataset CSV (header x1,...,xd,y)")->required();
    cmd_test->add_option("--i", opt_i, "First feature index (1-based)")->required();
    cmd_test->add_option("--j", opt_j, "Second feature index (1-based)")->required();
    cmd_test->add_option("--score", score_name,
                         "linear-residual | classification-margin | squared-residual");
    cmd_test->add_option("--theta-hat", theta_hat_arg,
                         "Model estimate: inline JSON array or single-column CSV path")
        ->required();
    cmd_test->add_option("--tau", tau, "Tolerance of the null hypothesis");
    auto* tau_x_opt = cmd_test->add_option("--tau-x", tau_x, "Feature-shift bound");
    auto* gauss_opt = cmd_test->add_option(
        "--tau-x-gaussian", gaussian_spec_path,
        "Compute tau_x from a Gaussian feature spec JSON {\"mu\":[...],\"sigma\":[[...]]}");
    gauss_opt->excludes(tau_x_opt);
    cmd_test->add_option("--alpha", alpha, "Significance level");
    cmd_test->add_option("--seed", seed, "Tie-break seed");
    cmd_test->add_option("--shuffle-seed", shuffle_seed,
                         "Optional pre-shuffle of rows before the deterministic split");

    // ---- simulate ----------------------------------------------------------
    auto* cmd_sim = app.add_subcommand("simulate", "Generate a synthetic dataset CSV");
    std::string sim_kind;
    std::size_t sim_n = 0, sim_d = 0, sim_m = 0;
    double sim_sigma = 1.0, sim_q = 0.5;
    std::string sim_theta_star, sim_mu, sim_w, sim_out;
    std::uint64_t sim_seed = 0;
    cmd_sim->add_option("--kind", sim_kind, "linear | quadratic-null | gmm | subset-binary")
        ->required();
    cmd_sim->add_option("--n", sim_n, "Number of records")->required();
    cmd_sim->add_option("--d", sim_d, "Dimension (quadratic-null, subset-binary)");
    cmd_sim->add_option("--theta-star", sim_theta_star, "Coefficients (linear)");
    cmd_sim->add_option("--sigma", sim_sigma, "Noise level (linear, subset-binary)");
    cmd_sim->add_option("--mu", sim_mu, "Component mean (gmm)");
    cmd_sim->add_option("--q", sim_q, "P(y = +1) (gmm)");
    cmd_sim->add_option("--m", sim_m, "Ones per row (subset-binary)");
    cmd_sim->add_option("--w", sim_w, "Ground-truth weights (subset-binary)");
    cmd_sim->add_option("--seed", sim_seed, "Generator seed");
    cmd_sim->add_option("--out", sim_out, "Output CSV path (default: stdout)");

    // ---- power -------------------------------------------------------------
    auto* cmd_power = app.add_subcommand("power", "Detectability calculators");
    std::string pw_setting;
    std::size_t pw_n = 0;
    double pw_alpha = 0.1, pw_beta = 0.1, pw_tau = 0.0, pw_sigma = 1.0;
    long long pw_i = 0, pw_j = 0;
    std::string pw_theta_star, pw_theta_hat, pw_mu;
    bool pw_mc = false;
    std::size_t pw_n_mc = 100000;
    std::uint64_t pw_seed = 0;
    cmd_power->add_option("--setting", pw_setting, "linear | binary")->required();
    cmd_power->add_option("--n", pw_n, "Sample count")->required();
    cmd_power->add_option("--alpha", pw_alpha, "Type-I level");
    cmd_power->add_option("--beta", pw_beta, "Type-II target");
    cmd_power->add_option("--tau", pw_tau, "Null tolerance");
    cmd_power->add_option("--i", pw_i, "First feature index (1-based)")->required();
    cmd_power->add_option("--j", pw_j, "Second feature index (1-based)")->required();
    cmd_power->add_option("--theta-star", pw_theta_star, "True coefficients (linear)");
    cmd_power->add_option("--theta-hat", pw_theta_hat, "Model estimate")->required();
    cmd_power->add_option("--sigma", pw_sigma, "Noise level (linear)");
    cmd_power->add_option("--mu", pw_mu, "Mixture mean (binary)");
    cmd_power->add_flag("--mc", pw_mc, "Also run the Monte Carlo ODC estimator");
    cmd_power->add_option("--n-mc", pw_n_mc, "Monte Carlo sample count");
    cmd_power->add_option("--seed", pw_seed, "Monte Carlo seed");

    // ---- multitest -----------------------------------------------------------
    auto* cmd_multi = app.add_subcommand("multitest", "Benjamini-Yekutieli over (id,p) CSV");
    std::string multi_csv;
    double multi_q = 0.1;
    cmd_multi->add_option("batch", multi_csv, "Two-column CSV: id,p")->required();
    cmd_multi->add_option("--q", multi_q, "Target FDR level")->required();

    // ---- experiment ------------------------------------------------------------
    auto* cmd_exp = app.add_subcommand("experiment", "Run a JSON-configured experiment");
    std::string exp_config, exp_out;
    unsigned exp_workers = 0;
    cmd_exp->add_option("config", exp_config, "Experiment config JSON")->required();
    cmd_exp->add_option("--out", exp_out, "Output directory (overrides config)");
    cmd_exp->add_option("--workers", exp_workers,
                        "Worker threads (overrides SWAPTEST_WORKERS)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code;
    }

    try {
        if (cmd_test->parsed()) {
            std::ifstream in(test_csv);
            if (!in) throw std::runtime_error("cannot open '" + test_csv + "'");
            Dataset data = read_dataset_csv(in);
            const FeaturePair pair = detail::pair_from_cli(opt_i, opt_j, data.dim());
            const auto theta_hat = detail::load_vector(theta_hat_arg);
            const auto score =
                ScoreFunction::make(detail::score_kind_from_string(score_name), theta_hat);
            if (!gaussian_spec_path.empty()) {
                std::ifstream spec_in(gaussian_spec_path);
                if (!spec_in) {
                    throw std::runtime_error("cannot open '" + gaussian_spec_path + "'");
                }
                const auto spec = gaussian_spec_from_json(nlohmann::json::parse(spec_in));
                tau_x = gaussian_swap_bound(spec, pair).value;
            }
            TestConfig cfg{tau, tau_x, alpha, seed};
            if (cfg.vacuous()) {
                err << "warning: tau + tau_x >= 1/2, the decision rule can never reject\n";
            }
            if (shuffle_seed) data = shuffle_rows(data, *shuffle_seed);
            const TestReport report = run_test(data, pair, score, cfg);
            out << to_json(report).dump(2) << '\n';
            return 0;
        }

        if (cmd_sim->parsed()) {
            GeneratorSpec spec;
            spec.seed = sim_seed;
            if (sim_kind == "linear") {
                if (sim_theta_star.empty()) throw std::runtime_error("linear needs --theta-star");
                spec.params = LinearParams{detail::load_vector(sim_theta_star), sim_sigma};
            } else if (sim_kind == "quadratic-null") {
                if (sim_d < 2) throw std::runtime_error("quadratic-null needs --d >= 2");
                spec.params = QuadraticNullParams{sim_d};
            } else if (sim_kind == "gmm") {
                if (sim_mu.empty()) throw std::runtime_error("gmm needs --mu");
                spec.params = GmmParams{detail::load_vector(sim_mu), sim_q};
            } else if (sim_kind == "subset-binary") {
                if (sim_w.empty()) throw std::runtime_error("subset-binary needs --w");
                const auto w = detail::load_vector(sim_w);
                spec.params = SubsetBinaryParams{sim_d ? sim_d : w.size(), sim_m, w, sim_sigma};
            } else {
                throw std::runtime_error("unknown generator kind '" + sim_kind + "'");
            }
            const Dataset data = spec.generate(sim_n);
            if (sim_out.empty()) {
                write_dataset_csv(out, data);
            } else {
                std::ofstream file(sim_out);
                if (!file) throw std::runtime_error("cannot write '" + sim_out + "'");
                write_dataset_csv(file, data);
            }
            return 0;
        }

        if (cmd_power->parsed()) {
            const auto theta_hat = detail::load_vector(pw_theta_hat);
            const FeaturePair pair = detail::pair_from_cli(pw_i, pw_j, theta_hat.size());
            const PowerQuery query{pw_n, pw_alpha, pw_beta, pw_tau};
            nlohmann::ordered_json j;
            j["setting"] = pw_setting;
            j["rho_n"] = rho_n(query);
            if (pw_setting == "linear") {
                if (pw_theta_star.empty()) throw std::runtime_error("linear needs --theta-star");
                const auto theta_star = detail::load_vector(pw_theta_star);
                j["odc_deviation"] = odc_deviation_linear(theta_star, theta_hat, pw_sigma, pair);
                const auto gap = min_gap_linear(query, theta_star, theta_hat, pw_sigma, pair);
                j["min_gap"] = gap ? nlohmann::ordered_json(*gap)
                                   : nlohmann::ordered_json("infeasible");
                if (pw_mc) {
                    auto [orig, swapped] =
                        linear_setting_samplers(theta_star, pw_sigma, pair);
                    const auto est =
                        odc_monte_carlo(ScoreFunction::linear_residual(theta_hat), orig,
                                        swapped, pw_n_mc, pw_seed);
                    j["mc"] = {{"deviation", est.deviation},
                               {"std_error", est.std_error},
                               {"n_mc", est.n_mc}};
                }
            } else if (pw_setting == "binary") {
                if (pw_mu.empty()) throw std::runtime_error("binary needs --mu");
                const auto mu = detail::load_vector(pw_mu);
                j["odc_deviation"] = odc_deviation_binary(mu, theta_hat, pair);
                const auto gap = min_gap_binary(query, theta_hat, pair);
                j["min_gap"] = gap ? nlohmann::ordered_json(*gap)
                                   : nlohmann::ordered_json("infeasible");
                if (pw_mc) {
                    auto [orig, swapped] = gmm_setting_samplers(mu, 0.5, pair);
                    const auto est =
                        odc_monte_carlo(ScoreFunction::classification_margin(theta_hat), orig,
                                        swapped, pw_n_mc, pw_seed);
                    j["mc"] = {{"deviation", est.deviation},
                               {"std_error", est.std_error},
                               {"n_mc", est.n_mc}};
                }
            } else {
                throw std::runtime_error("unknown power setting '" + pw_setting + "'");
            }
            out << j.dump(2) << '\n';
            return 0;
        }

        if (cmd_multi->parsed()) {
            PvalueBatch batch{detail::read_pvalue_csv(multi_csv), multi_q};
            const auto rejected = benjamini_yekutieli(batch);
            nlohmann::ordered_json j;
            j["m"] = batch.entries.size();
            j["q"] = multi_q;
            j["rejected"] = rejected;
            out << j.dump(2) << '\n';
            return 0;
        }

        if (cmd_exp->parsed()) {
            std::ifstream in(exp_config);
            if (!in) throw std::runtime_error("cannot open '" + exp_config + "'");
            ExperimentConfig config = ExperimentConfig::from_json(nlohmann::json::parse(in));
            if (!exp_out.empty()) config.output = exp_out;
            if (exp_workers) config.workers = exp_workers;
            if (config.output.empty()) {
                throw std::runtime_error("no output directory (config 'output' or --out)");
            }
            if (config.tau + config.tau_x >= 0.5) {
                err << "warning: tau + tau_x >= 1/2, the decision rule can never reject\n";
            }
            const ExperimentResult result = run_experiment(config);
            const auto written = write_artifacts(result, config.output);
            nlohmann::ordered_json j;
            j["experiment"] = to_string(config.kind);
            j["written"] = written;
            out << j.dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run(args, out, err);
}

}  // namespace swaptest::cli
