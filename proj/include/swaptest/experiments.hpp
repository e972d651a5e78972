#pragma once

// Experiment orchestrator. Each experiment kind maps a JSON config to
// machine-readable artifacts: d x d rejection-rate matrices (CSV) plus a
// JSON summary embedding the full config, seed and Monte Carlo slack.
//
// Determinism contract: replicate r of experiment kind e uses the sub-seed
// derive_seed(root_seed, {kind_id(e), ...indices..., r}); workers share
// nothing and per-replicate results land in preallocated slots that are
// reduced in replicate order, so artifacts are byte-identical for any
// worker count.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "swaptest/core.hpp"
#include "swaptest/multiplicity.hpp"
#include "swaptest/parallel.hpp"
#include "swaptest/scores.hpp"
#include "swaptest/shift_bounds.hpp"
#include "swaptest/simgen.hpp"
#include "swaptest/test_engine.hpp"

namespace swaptest {

enum class ExperimentKind {
    SizeQuadratic,
    PowerLinearGrid,
    PowerGmm,
    DatamodelSynthetic,
    PvalueUniformity,
    FdrCheck,
};

inline std::uint64_t kind_id(ExperimentKind kind) {
    return static_cast<std::uint64_t>(kind) + 1;
}

inline std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SizeQuadratic: return "size-quadratic";
        case ExperimentKind::PowerLinearGrid: return "power-linear-grid";
        case ExperimentKind::PowerGmm: return "power-gmm";
        case ExperimentKind::DatamodelSynthetic: return "datamodel-synthetic";
        case ExperimentKind::PvalueUniformity: return "pvalue-uniformity";
        case ExperimentKind::FdrCheck: return "fdr-check";
    }
    return "unknown";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "size-quadratic") return ExperimentKind::SizeQuadratic;
    if (s == "power-linear-grid") return ExperimentKind::PowerLinearGrid;
    if (s == "power-gmm") return ExperimentKind::PowerGmm;
    if (s == "datamodel-synthetic") return ExperimentKind::DatamodelSynthetic;
    if (s == "pvalue-uniformity") return ExperimentKind::PvalueUniformity;
    if (s == "fdr-check") return ExperimentKind::FdrCheck;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SizeQuadratic;
    std::size_t replicates = 1;
    std::uint64_t root_seed = 0;
    std::string output;
    unsigned workers = 0;  // 0 = SWAPTEST_WORKERS / hardware default
    double tau = 0.0;
    double tau_x = 0.0;

    // size-quadratic, pvalue-uniformity
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> alphas;

    // power-linear-grid
    std::vector<double> theta_star;
    double noise_sigma = 1.0;
    std::vector<double> estimate_sigmas;
    double alpha = 0.1;

    // power-gmm
    std::vector<std::size_t> ns;
    std::vector<double> mu;
    double q = 0.5;

    // datamodel-synthetic
    std::size_t ones = 0;
    std::vector<double> weights;
    double estimate_sigma = 1.0;

    // fdr-check
    std::size_t m_tests = 0;
    double fdr_q = 0.2;
    std::vector<double> null_fractions;

    void validate() const {
        if (replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
        switch (kind) {
            case ExperimentKind::SizeQuadratic:
                require(n >= 2 && d >= 2 && !alphas.empty(), "size-quadratic needs n, d, alphas");
                break;
            case ExperimentKind::PowerLinearGrid:
                require(n >= 2 && theta_star.size() >= 2 && !estimate_sigmas.empty() &&
                            noise_sigma > 0.0,
                        "power-linear-grid needs n, theta_star, estimate_sigmas, noise_sigma");
                break;
            case ExperimentKind::PowerGmm:
                require(!ns.empty() && mu.size() >= 2 && q > 0.0 && q < 1.0,
                        "power-gmm needs ns, mu, q in (0,1)");
                for (std::size_t k = 0; k + 1 < ns.size(); ++k) {
                    require(ns[k] < ns[k + 1], "power-gmm: ns must be strictly increasing");
                }
                break;
            case ExperimentKind::DatamodelSynthetic:
                require(n >= 2 && d >= 2 && ones > 0 && ones < d && weights.size() == d &&
                            noise_sigma > 0.0,
                        "datamodel-synthetic needs n, d, 0 < ones < d, weights of length d");
                break;
            case ExperimentKind::PvalueUniformity:
                require(n >= 2 && d >= 2 && !alphas.empty(), "pvalue-uniformity needs n, d, alphas");
                break;
            case ExperimentKind::FdrCheck:
                require(m_tests >= 1 && fdr_q > 0.0 && fdr_q < 1.0 && !null_fractions.empty(),
                        "fdr-check needs m, q in (0,1), null_fractions");
                break;
        }
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        c.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
        c.replicates = j.at("replicates").get<std::size_t>();
        c.root_seed = j.at("root_seed").get<std::uint64_t>();
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
        if (j.contains("tau")) c.tau = j.at("tau").get<double>();
        if (j.contains("tau_x")) c.tau_x = j.at("tau_x").get<double>();
        if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
        if (j.contains("d")) c.d = j.at("d").get<std::size_t>();
        if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("theta_star")) c.theta_star = coefficients_from_json(j.at("theta_star"));
        if (j.contains("noise_sigma")) c.noise_sigma = j.at("noise_sigma").get<double>();
        if (j.contains("estimate_sigmas")) {
            c.estimate_sigmas = j.at("estimate_sigmas").get<std::vector<double>>();
        }
        if (j.contains("ns")) c.ns = j.at("ns").get<std::vector<std::size_t>>();
        if (j.contains("mu")) c.mu = coefficients_from_json(j.at("mu"));
        if (j.contains("q")) c.q = j.at("q").get<double>();
        if (j.contains("ones")) c.ones = j.at("ones").get<std::size_t>();
        if (j.contains("weights")) c.weights = coefficients_from_json(j.at("weights"));
        if (j.contains("estimate_sigma")) c.estimate_sigma = j.at("estimate_sigma").get<double>();
        if (j.contains("m")) c.m_tests = j.at("m").get<std::size_t>();
        if (j.contains("fdr_q")) c.fdr_q = j.at("fdr_q").get<double>();
        if (c.kind == ExperimentKind::FdrCheck && j.contains("q")) {
            c.fdr_q = j.at("q").get<double>();
        }
        if (j.contains("null_fractions")) {
            c.null_fractions = j.at("null_fractions").get<std::vector<double>>();
        }
        c.validate();
        return c;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["experiment"] = to_string(kind);
        j["replicates"] = replicates;
        j["root_seed"] = root_seed;
        j["tau"] = tau;
        j["tau_x"] = tau_x;
        switch (kind) {
            case ExperimentKind::SizeQuadratic:
                j["n"] = n;
                j["d"] = d;
                j["alphas"] = alphas;
                break;
            case ExperimentKind::PowerLinearGrid:
                j["n"] = n;
                j["theta_star"] = theta_star;
                j["noise_sigma"] = noise_sigma;
                j["estimate_sigmas"] = estimate_sigmas;
                j["alpha"] = alpha;
                break;
            case ExperimentKind::PowerGmm:
                j["ns"] = ns;
                j["mu"] = mu;
                j["q"] = q;
                j["alpha"] = alpha;
                break;
            case ExperimentKind::DatamodelSynthetic:
                j["n"] = n;
                j["d"] = d;
                j["ones"] = ones;
                j["weights"] = weights;
                j["noise_sigma"] = noise_sigma;
                j["estimate_sigma"] = estimate_sigma;
                j["alpha"] = alpha;
                break;
            case ExperimentKind::PvalueUniformity:
                j["n"] = n;
                j["d"] = d;
                j["alphas"] = alphas;
                break;
            case ExperimentKind::FdrCheck:
                j["m"] = m_tests;
                j["q"] = fdr_q;
                j["null_fractions"] = null_fractions;
                break;
        }
        return j;
    }

  private:
    static void require(bool ok, const char* message) {
        if (!ok) throw std::invalid_argument(std::string("experiment config: ") + message);
    }
};

/// Symmetric d x d matrix of rejection rates; the diagonal holds the
/// degenerate i = i tests.
struct RejectionMatrix {
    std::size_t d = 0;
    std::vector<double> rates;  // row-major d*d
    std::string label;
    double alpha = 0.0;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::uint64_t seed = 0;

    double at(std::size_t i, std::size_t j) const { return rates[i * d + j]; }

    double max_offdiagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (i != j) m = std::max(m, at(i, j));
            }
        }
        return m;
    }

    double max_diagonal() const {
        double m = 0.0;
        for (std::size_t i = 0; i < d; ++i) m = std::max(m, at(i, i));
        return m;
    }
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RejectionMatrix> matrices;
    nlohmann::ordered_json summary;
};

namespace detail {

inline std::string format_compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

/// Upper-triangle cell list (i <= j, diagonal included) in row order.
inline std::vector<FeaturePair> upper_cells(std::size_t d) {
    std::vector<FeaturePair> cells;
    cells.reserve(d * (d + 1) / 2);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) cells.push_back({i, j});
    }
    return cells;
}

/// Turns per-cell rejection counts into a mirrored full matrix.
inline RejectionMatrix make_matrix(std::size_t d, const std::vector<FeaturePair>& cells,
                                   const std::vector<std::uint32_t>& counts,
                                   std::size_t replicates) {
    RejectionMatrix m;
    m.d = d;
    m.replicates = replicates;
    m.rates.assign(d * d, 0.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const double rate = static_cast<double>(counts[c]) / static_cast<double>(replicates);
        m.rates[cells[c].i * d + cells[c].j] = rate;
        m.rates[cells[c].j * d + cells[c].i] = rate;
    }
    return m;
}

inline double mc_slack(double alpha, std::size_t replicates) {
    return 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(replicates));
}

/// U_n for every cell of one dataset under one score, via the same seed
/// derivation run_test uses.
template <typename Score>
std::vector<double> cell_statistics(const Dataset& data, const std::vector<FeaturePair>& cells,
                                    const Score& score, std::uint64_t engine_seed) {
    std::vector<double> u(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const PairedDataset paired = split_pairs(data, cells[c]);
        const std::uint64_t tie_seed =
            derive_seed(engine_seed, {stream::kTie, cells[c].i, cells[c].j});
        u[c] = compute_statistic(paired, score, tie_seed).u_n;
    }
    return u;
}

}  // namespace detail

inline ExperimentResult run_size_quadratic(const ExperimentConfig& cfg) {
    const auto cells = detail::upper_cells(cfg.d);
    const std::size_t n_used = cfg.n - (cfg.n % 2);
    std::vector<double> thresholds(cfg.alphas.size());
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        thresholds[a] = decision_threshold(n_used, {cfg.tau, cfg.tau_x, cfg.alphas[a], 0});
    }

    std::vector<std::vector<std::uint8_t>> rejects(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t rep) {
        const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), rep});
        const Dataset data = gen_quadratic_null(cfg.n, cfg.d, sub);
        const auto theta_hat = draw_theta(std::vector<double>(cfg.d, 0.0), 1.0, sub);
        const auto score = ScoreFunction::linear_residual(theta_hat);
        const auto u = detail::cell_statistics(data, cells, score, sub);
        std::vector<std::uint8_t> flags(cfg.alphas.size() * cells.size());
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                flags[a * cells.size() + c] = std::abs(u[c] - 0.5) >= thresholds[a];
            }
        }
        rejects[rep] = std::move(flags);
    });

    ExperimentResult result;
    result.config = cfg;
    nlohmann::ordered_json slack;
    nlohmann::ordered_json matrices_meta = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        std::vector<std::uint32_t> counts(cells.size(), 0);
        for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                counts[c] += rejects[rep][a * cells.size() + c];
            }
        }
        RejectionMatrix m = detail::make_matrix(cfg.d, cells, counts, cfg.replicates);
        m.alpha = cfg.alphas[a];
        m.n = n_used;
        m.seed = cfg.root_seed;
        m.label = "alpha" + detail::format_compact(cfg.alphas[a]);
        slack[detail::format_compact(cfg.alphas[a])] = detail::mc_slack(cfg.alphas[a], cfg.replicates);
        matrices_meta.push_back({{"label", m.label},
                                 {"alpha", m.alpha},
                                 {"max_offdiagonal_rate", m.max_offdiagonal()},
                                 {"max_diagonal_rate", m.max_diagonal()}});
        result.matrices.push_back(std::move(m));
    }
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["n_used"] = n_used;
    result.summary["mc_slack"] = slack;
    result.summary["diagonal_degenerate"] = true;
    result.summary["matrices"] = matrices_meta;
    return result;
}

inline ExperimentResult run_power_linear_grid(const ExperimentConfig& cfg) {
    const std::size_t d = cfg.theta_star.size();
    const auto cells = detail::upper_cells(d);
    const std::size_t n_used = cfg.n - (cfg.n % 2);
    const double threshold = decision_threshold(n_used, {cfg.tau, cfg.tau_x, cfg.alpha, 0});

    ExperimentResult result;
    result.config = cfg;
    nlohmann::ordered_json matrices_meta = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < cfg.estimate_sigmas.size(); ++s) {
        const double est_sigma = cfg.estimate_sigmas[s];
        std::vector<std::vector<std::uint8_t>> rejects(cfg.replicates);
        parallel_for(cfg.replicates, cfg.workers, [&](std::size_t rep) {
            const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), s, rep});
            const Dataset data = gen_linear(cfg.n, cfg.theta_star, cfg.noise_sigma, sub);
            const auto theta_hat = draw_theta(cfg.theta_star, est_sigma, sub);
            const auto score = ScoreFunction::linear_residual(theta_hat);
            const auto u = detail::cell_statistics(data, cells, score, sub);
            std::vector<std::uint8_t> flags(cells.size());
            for (std::size_t c = 0; c < cells.size(); ++c) {
                flags[c] = std::abs(u[c] - 0.5) >= threshold;
            }
            rejects[rep] = std::move(flags);
        });

        std::vector<std::uint32_t> counts(cells.size(), 0);
        for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
            for (std::size_t c = 0; c < cells.size(); ++c) counts[c] += rejects[rep][c];
        }
        RejectionMatrix m = detail::make_matrix(d, cells, counts, cfg.replicates);
        m.alpha = cfg.alpha;
        m.n = n_used;
        m.seed = cfg.root_seed;
        m.label = "sigma" + detail::format_compact(est_sigma);
        matrices_meta.push_back({{"label", m.label},
                                 {"estimate_sigma", est_sigma},
                                 {"max_offdiagonal_rate", m.max_offdiagonal()}});
        result.matrices.push_back(std::move(m));
    }
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["n_used"] = n_used;
    result.summary["alpha"] = cfg.alpha;
    result.summary["mc_slack"] = detail::mc_slack(cfg.alpha, cfg.replicates);
    result.summary["diagonal_degenerate"] = true;
    result.summary["matrices"] = matrices_meta;
    return result;
}

inline ExperimentResult run_power_gmm(const ExperimentConfig& cfg) {
    const std::size_t d = cfg.mu.size();
    const auto cells = detail::upper_cells(d);
    const std::size_t n_max = cfg.ns.back();

    std::vector<double> thresholds(cfg.ns.size());
    for (std::size_t k = 0; k < cfg.ns.size(); ++k) {
        thresholds[k] = decision_threshold(cfg.ns[k] - (cfg.ns[k] % 2),
                                           {cfg.tau, cfg.tau_x, cfg.alpha, 0});
    }

    // Nested prefixes: each replicate draws one stream of n_max records and
    // every n uses its first n rows, which both preserves the marginal law
    // and couples the arms for stable monotonicity comparisons.
    std::vector<std::vector<std::uint8_t>> rejects(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t rep) {
        const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), rep});
        const Dataset full = gen_gmm(n_max, cfg.mu, cfg.q, sub);
        const auto theta_hat = draw_theta(std::vector<double>(d, 0.0), 1.0, sub);
        const auto score = ScoreFunction::classification_margin(theta_hat);
        std::vector<std::uint8_t> flags(cfg.ns.size() * cells.size());
        for (std::size_t k = 0; k < cfg.ns.size(); ++k) {
            const Dataset data = full.head(cfg.ns[k]);
            const auto u = detail::cell_statistics(data, cells, score, sub);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                flags[k * cells.size() + c] = std::abs(u[c] - 0.5) >= thresholds[k];
            }
        }
        rejects[rep] = std::move(flags);
    });

    ExperimentResult result;
    result.config = cfg;
    nlohmann::ordered_json matrices_meta = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < cfg.ns.size(); ++k) {
        std::vector<std::uint32_t> counts(cells.size(), 0);
        for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                counts[c] += rejects[rep][k * cells.size() + c];
            }
        }
        RejectionMatrix m = detail::make_matrix(d, cells, counts, cfg.replicates);
        m.alpha = cfg.alpha;
        m.n = cfg.ns[k];
        m.seed = cfg.root_seed;
        m.label = "n" + std::to_string(cfg.ns[k]);
        matrices_meta.push_back({{"label", m.label},
                                 {"n", cfg.ns[k]},
                                 {"max_offdiagonal_rate", m.max_offdiagonal()},
                                 {"max_diagonal_rate", m.max_diagonal()}});
        result.matrices.push_back(std::move(m));
    }
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["alpha"] = cfg.alpha;
    result.summary["mc_slack"] = detail::mc_slack(cfg.alpha, cfg.replicates);
    result.summary["diagonal_degenerate"] = true;
    result.summary["matrices"] = matrices_meta;
    return result;
}

inline ExperimentResult run_datamodel_synthetic(const ExperimentConfig& cfg) {
    const auto cells = detail::upper_cells(cfg.d);
    const std::size_t n_used = cfg.n - (cfg.n % 2);
    const double threshold = decision_threshold(n_used, {cfg.tau, cfg.tau_x, cfg.alpha, 0});

    std::vector<std::vector<std::uint8_t>> rejects(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t rep) {
        const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), rep});
        const Dataset data =
            gen_subset_binary(cfg.n, cfg.d, cfg.ones, cfg.weights, cfg.noise_sigma, sub);
        const auto theta_hat = draw_theta(cfg.weights, cfg.estimate_sigma, sub);
        const auto score = ScoreFunction::squared_residual(theta_hat);
        const auto u = detail::cell_statistics(data, cells, score, sub);
        std::vector<std::uint8_t> flags(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            flags[c] = std::abs(u[c] - 0.5) >= threshold;
        }
        rejects[rep] = std::move(flags);
    });

    std::vector<std::uint32_t> counts(cells.size(), 0);
    for (std::size_t rep = 0; rep < cfg.replicates; ++rep) {
        for (std::size_t c = 0; c < cells.size(); ++c) counts[c] += rejects[rep][c];
    }
    RejectionMatrix m = detail::make_matrix(cfg.d, cells, counts, cfg.replicates);
    m.alpha = cfg.alpha;
    m.n = n_used;
    m.seed = cfg.root_seed;
    m.label = "rates";

    // Ground truth from the weights: duplicated coefficients are the null
    // pairs (the response law is symmetric exactly in those swaps).
    double max_null = 0.0;
    double sum_alt = 0.0;
    std::size_t alt_count = 0;
    nlohmann::ordered_json null_pairs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < cfg.d; ++i) {
        for (std::size_t j = i + 1; j < cfg.d; ++j) {
            if (cfg.weights[i] == cfg.weights[j]) {
                max_null = std::max(max_null, m.at(i, j));
                null_pairs.push_back({i + 1, j + 1});
            } else {
                sum_alt += m.at(i, j);
                ++alt_count;
            }
        }
    }

    ExperimentResult result;
    result.config = cfg;
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["n_used"] = n_used;
    result.summary["alpha"] = cfg.alpha;
    result.summary["mc_slack"] = detail::mc_slack(cfg.alpha, cfg.replicates);
    result.summary["shift_bound"] = {{"value", 0.0},
                                     {"provenance", to_string(ShiftProvenance::UniformBinaryExact)}};
    result.summary["null_pairs_one_based"] = null_pairs;
    result.summary["max_null_pair_rate"] = max_null;
    result.summary["mean_alternative_rate"] =
        alt_count ? sum_alt / static_cast<double>(alt_count) : 0.0;
    result.matrices.push_back(std::move(m));
    return result;
}

inline ExperimentResult run_pvalue_uniformity(const ExperimentConfig& cfg) {
    std::vector<double> pvals(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t rep) {
        const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), rep});
        const Dataset data = gen_quadratic_null(cfg.n, cfg.d, sub);
        const auto theta_hat = draw_theta(std::vector<double>(cfg.d, 0.0), 1.0, sub);
        const auto score = ScoreFunction::linear_residual(theta_hat);
        TestConfig tc;
        tc.tau = cfg.tau;
        tc.tau_x = cfg.tau_x;
        tc.alpha = 0.5;  // only the p-value is recorded
        tc.seed = sub;
        pvals[rep] = run_test(data, FeaturePair{0, 1}, score, tc).p_value;
    });

    ExperimentResult result;
    result.config = cfg;
    nlohmann::ordered_json rates;
    nlohmann::ordered_json bounds;
    for (double a : cfg.alphas) {
        std::size_t hits = 0;
        for (double p : pvals) {
            if (p <= a) ++hits;
        }
        rates[detail::format_compact(a)] =
            static_cast<double>(hits) / static_cast<double>(cfg.replicates);
        bounds[detail::format_compact(a)] = a + detail::mc_slack(a, cfg.replicates);
    }
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["empirical_p_at_most_alpha"] = rates;
    result.summary["super_uniformity_bounds"] = bounds;
    return result;
}

inline ExperimentResult run_fdr_check(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.config = cfg;
    nlohmann::ordered_json fdr;
    for (std::size_t k = 0; k < cfg.null_fractions.size(); ++k) {
        const double nf = cfg.null_fractions[k];
        const std::uint64_t sub = derive_seed(cfg.root_seed, {kind_id(cfg.kind), k});
        fdr[detail::format_compact(nf)] =
            fdr_simulation_check(nf, cfg.m_tests, cfg.fdr_q, cfg.replicates, sub);
    }
    result.summary["experiment"] = to_string(cfg.kind);
    result.summary["config"] = cfg.to_json();
    result.summary["empirical_fdr"] = fdr;
    result.summary["target_q"] = cfg.fdr_q;
    return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.kind) {
        case ExperimentKind::SizeQuadratic: return run_size_quadratic(cfg);
        case ExperimentKind::PowerLinearGrid: return run_power_linear_grid(cfg);
        case ExperimentKind::PowerGmm: return run_power_gmm(cfg);
        case ExperimentKind::DatamodelSynthetic: return run_datamodel_synthetic(cfg);
        case ExperimentKind::PvalueUniformity: return run_pvalue_uniformity(cfg);
        case ExperimentKind::FdrCheck: return run_fdr_check(cfg);
    }
    throw std::logic_error("run_experiment: unreachable");
}

inline std::string matrix_to_csv(const RejectionMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.d; ++i) {
        for (std::size_t j = 0; j < m.d; ++j) {
            if (j) out += ',';
            out += detail::format_compact(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

/// Writes <kind>_summary.json plus one <kind>_rates_<label>.csv per matrix.
/// Returns the list of written paths.
inline std::vector<std::string> write_artifacts(const ExperimentResult& result,
                                                const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;
    const std::string prefix = to_string(result.config.kind);

    nlohmann::ordered_json summary = result.summary;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& m : result.matrices) {
        const std::string name = prefix + "_rates_" + m.label + ".csv";
        const fs::path path = fs::path(dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << matrix_to_csv(m);
        files.push_back(name);
        written.push_back(path.string());
    }
    summary["artifact_files"] = files;

    const fs::path spath = fs::path(dir) / (prefix + "_summary.json");
    std::ofstream out(spath);
    if (!out) throw std::runtime_error("cannot write " + spath.string());
    out << summary.dump(2) << '\n';
    written.push_back(spath.string());
    return written;
}

}  // namespace swaptest
