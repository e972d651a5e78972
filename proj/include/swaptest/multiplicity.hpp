#pragma once

// Benjamini-Yekutieli step-up FDR control over a batch of p-values: with
// c_m = sum_{i<=m} 1/i, reject the k smallest p-values where
// k = max{t : p_(t) <= t q / (m c_m)}, ties at the cut included. The
// harmonic factor makes the control valid under arbitrary dependence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swaptest/rng.hpp"
#include "swaptest/scores.hpp"
#include "swaptest/simgen.hpp"
#include "swaptest/test_engine.hpp"

namespace swaptest {

struct PvalueEntry {
    std::string id;
    double p = 1.0;
};

struct PvalueBatch {
    std::vector<PvalueEntry> entries;
    double q = 0.1;

    void validate() const {
        if (entries.empty()) throw std::invalid_argument("PvalueBatch: empty batch");
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("PvalueBatch: q must lie in (0,1)");
        for (const auto& e : entries) {
            if (!(e.p > 0.0 && e.p <= 1.0) || !std::isfinite(e.p)) {
                throw std::invalid_argument("PvalueBatch: p-value for '" + e.id +
                                            "' outside (0,1]");
            }
        }
    }
};

/// Ids of the rejected hypotheses, ordered by (p, id). The internal sort is
/// keyed on (p, id) so the output is invariant to input order.
inline std::vector<std::string> benjamini_yekutieli(const PvalueBatch& batch) {
    batch.validate();
    std::vector<PvalueEntry> sorted = batch.entries;
    std::sort(sorted.begin(), sorted.end(), [](const PvalueEntry& a, const PvalueEntry& b) {
        return a.p != b.p ? a.p < b.p : a.id < b.id;
    });
    const std::size_t m = sorted.size();
    double c_m = 0.0;
    for (std::size_t i = 1; i <= m; ++i) c_m += 1.0 / static_cast<double>(i);

    std::size_t k = 0;
    for (std::size_t t = 1; t <= m; ++t) {
        const double cutoff = static_cast<double>(t) * batch.q / (static_cast<double>(m) * c_m);
        if (sorted[t - 1].p <= cutoff) k = t;
    }
    if (k == 0) return {};
    // Step-up semantics: everything at or below the cut p-value is rejected,
    // which includes ties sitting just past rank k.
    const double p_cut = sorted[k - 1].p;
    std::vector<std::string> rejected;
    for (const auto& e : sorted) {
        if (e.p <= p_cut) rejected.push_back(e.id);
    }
    return rejected;
}

/// Simulation check of the FDR guarantee: each replicate builds m p-values
/// by actually running the swap test — nulls on data where the pair has
/// symmetric influence, non-nulls on a strongly separated alternative —
/// applies the step-up rule, and averages the false-discovery proportion.
inline double fdr_simulation_check(double null_fraction, std::size_t m, double q,
                                   std::size_t replicates, std::uint64_t seed) {
    if (!(null_fraction >= 0.0 && null_fraction <= 1.0)) {
        throw std::invalid_argument("fdr_simulation_check: null_fraction outside [0,1]");
    }
    if (m == 0 || replicates == 0) {
        throw std::invalid_argument("fdr_simulation_check: m and replicates must be >= 1");
    }
    if (!(q >= 0.0 && q < 1.0)) {
        throw std::invalid_argument("fdr_simulation_check: q must lie in [0,1)");
    }
    if (q == 0.0) return 0.0;  // the rule never rejects at q = 0

    const std::size_t n_per_test = 200;
    const std::size_t null_count = static_cast<std::size_t>(
        std::llround(null_fraction * static_cast<double>(m)));
    const std::vector<double> theta_null{1.0, 1.0};
    const std::vector<double> theta_alt{1.0, 5.0};
    const FeaturePair pair{0, 1};

    double fdp_sum = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
        PvalueBatch batch;
        batch.q = q;
        batch.entries.reserve(m);
        for (std::size_t t = 0; t < m; ++t) {
            const bool is_null = t < null_count;
            const std::uint64_t data_seed = derive_seed(seed, {r, t});
            const Dataset data =
                gen_linear(n_per_test, is_null ? theta_null : theta_alt, 1.0, data_seed);
            TestConfig cfg;
            cfg.alpha = 0.5;  // only the p-value feeds the step-up rule
            cfg.seed = data_seed;
            const auto score = ScoreFunction::linear_residual(is_null ? theta_null : theta_alt);
            const TestReport report = run_test(data, pair, score, cfg);
            batch.entries.push_back({std::to_string(t), report.p_value});
        }
        const auto rejected = benjamini_yekutieli(batch);
        if (!rejected.empty()) {
            std::size_t false_rejections = 0;
            for (const auto& id : rejected) {
                if (static_cast<std::size_t>(std::stoul(id)) < null_count) ++false_rejections;
            }
            fdp_sum += static_cast<double>(false_rejections) /
                       static_cast<double>(rejected.size());
        }
    }
    return fdp_sum / static_cast<double>(replicates);
}

}  // namespace swaptest
