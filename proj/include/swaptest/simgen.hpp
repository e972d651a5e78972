#pragma once

// Seeded synthetic data generators for the experiment settings:
//   * linear:         x ~ N(0, I_d),  y | x ~ N(x^T theta*, sigma^2)
//   * quadratic-null: x ~ N(0, I_d),  y | x ~ N(x^T S x, 1) with S = ones + I,
//                     so the conditional mean is invariant under every
//                     coordinate swap and the tau = 0 null holds for all pairs
//   * gmm:            y = +1 w.p. q else -1,  x ~ N(y mu, I_d)
//   * subset-binary:  x uniform over {0,1}^d vectors with exactly m ones
//                     (partial Fisher-Yates), y = x^T w + N(0, sigma^2)
// Same spec + seed give a bit-identical Dataset; all normal draws go through
// the pinned inverse-CDF kernel.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "swaptest/core.hpp"
#include "swaptest/rng.hpp"

namespace swaptest {

inline Dataset gen_linear(std::size_t n, const std::vector<double>& theta_star, double sigma,
                          std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_linear: n must be >= 1");
    if (theta_star.size() < 2) throw std::invalid_argument("gen_linear: need d >= 2");
    if (!(sigma > 0.0)) throw std::invalid_argument("gen_linear: sigma must be > 0");
    const std::size_t d = theta_star.size();
    Rng rng(derive_seed(seed, {stream::kData}));
    std::vector<double> features(n * d);
    std::vector<double> responses(n);
    for (std::size_t r = 0; r < n; ++r) {
        double mean = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = rng.normal();
            features[r * d + c] = v;
            mean += v * theta_star[c];
        }
        responses[r] = mean + sigma * rng.normal();
    }
    return Dataset(std::move(features), std::move(responses), d);
}

inline Dataset gen_quadratic_null(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_quadratic_null: n must be >= 1");
    if (d < 2) throw std::invalid_argument("gen_quadratic_null: need d >= 2");
    Rng rng(derive_seed(seed, {stream::kData}));
    std::vector<double> features(n * d);
    std::vector<double> responses(n);
    for (std::size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = rng.normal();
            features[r * d + c] = v;
            sum += v;
            sumsq += v * v;
        }
        // x^T (ones + I) x = (sum x)^2 + sum x^2
        responses[r] = sum * sum + sumsq + rng.normal();
    }
    return Dataset(std::move(features), std::move(responses), d);
}

inline Dataset gen_gmm(std::size_t n, const std::vector<double>& mu, double q,
                       std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_gmm: n must be >= 1");
    if (mu.size() < 2) throw std::invalid_argument("gen_gmm: need d >= 2");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("gen_gmm: q must lie in (0,1)");
    const std::size_t d = mu.size();
    Rng rng(derive_seed(seed, {stream::kData}));
    std::vector<double> features(n * d);
    std::vector<double> responses(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double y = rng.uniform01() < q ? 1.0 : -1.0;
        responses[r] = y;
        for (std::size_t c = 0; c < d; ++c) {
            features[r * d + c] = y * mu[c] + rng.normal();
        }
    }
    return Dataset(std::move(features), std::move(responses), d);
}

inline Dataset gen_subset_binary(std::size_t n, std::size_t d, std::size_t m,
                                 const std::vector<double>& w, double sigma,
                                 std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_subset_binary: n must be >= 1");
    if (d < 2) throw std::invalid_argument("gen_subset_binary: need d >= 2");
    if (m == 0 || m >= d) throw std::invalid_argument("gen_subset_binary: need 0 < m < d");
    if (w.size() != d) throw std::invalid_argument("gen_subset_binary: weight length != d");
    if (!(sigma > 0.0)) throw std::invalid_argument("gen_subset_binary: sigma must be > 0");
    Rng rng(derive_seed(seed, {stream::kData}));
    std::vector<double> features(n * d, 0.0);
    std::vector<double> responses(n);
    std::vector<std::size_t> idx(d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) idx[c] = c;
        // Partial Fisher-Yates: the first m entries are a uniform m-subset.
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t pick = k + static_cast<std::size_t>(rng.below(d - k));
            std::swap(idx[k], idx[pick]);
        }
        double mean = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            features[r * d + idx[k]] = 1.0;
            mean += w[idx[k]];
        }
        responses[r] = mean + sigma * rng.normal();
    }
    return Dataset(std::move(features), std::move(responses), d);
}

/// One model-estimate draw theta_hat ~ N(center, spread^2 I). Experiments
/// derive the seed from (root seed, replicate index) so the estimate is
/// fixed within a replicate and varies across replicates.
inline std::vector<double> draw_theta(const std::vector<double>& center, double spread,
                                      std::uint64_t seed) {
    if (!(spread >= 0.0)) throw std::invalid_argument("draw_theta: spread must be >= 0");
    Rng rng(derive_seed(seed, {stream::kTheta}));
    std::vector<double> out(center.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = center[k] + spread * rng.normal();
    return out;
}

// --------------------------------------------------------------------------
// Tagged generator description, the unit the CLI's `simulate` command and
// experiment configs traffic in.
// --------------------------------------------------------------------------

struct LinearParams {
    std::vector<double> theta_star;
    double sigma = 1.0;
};

struct QuadraticNullParams {
    std::size_t d = 2;
};

struct GmmParams {
    std::vector<double> mu;
    double q = 0.5;
};

struct SubsetBinaryParams {
    std::size_t d = 2;
    std::size_t m = 1;
    std::vector<double> w;
    double sigma = 1.0;
};

struct GeneratorSpec {
    std::variant<LinearParams, QuadraticNullParams, GmmParams, SubsetBinaryParams> params;
    std::uint64_t seed = 0;

    Dataset generate(std::size_t n) const {
        if (const auto* p = std::get_if<LinearParams>(&params)) {
            return gen_linear(n, p->theta_star, p->sigma, seed);
        }
        if (const auto* p = std::get_if<QuadraticNullParams>(&params)) {
            return gen_quadratic_null(n, p->d, seed);
        }
        if (const auto* p = std::get_if<GmmParams>(&params)) {
            return gen_gmm(n, p->mu, p->q, seed);
        }
        const auto& p = std::get<SubsetBinaryParams>(params);
        return gen_subset_binary(n, p.d, p.m, p.w, p.sigma, seed);
    }
};

}  // namespace swaptest
