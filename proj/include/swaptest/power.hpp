#pragma once

// Power analysis. rho_n(alpha, beta, tau) = 2 exp(-n beta^2)
// + sqrt(log(2/alpha)/n) + tau is the detectability budget; the ordinal
// dominance curve F_T o G_T^{-1} drives power through its average deviation
// from the identity. Closed forms are implemented for the two analyzed
// settings:
//   * linear regression, absolute-residual score:
//       (2/pi) arctan(|s1 - s2| / (s1 + s2)),
//       s1^2 = sigma^2 + |theta* - theta_hat|^2,
//       s2^2 = sigma^2 + |theta* - theta_hat_swap|^2
//   * Gaussian-mixture classification, margin score:
//       Phi(|(th_i - th_j)(mu_i - mu_j)| / (sqrt(2) |theta_hat|)) - 1/2
// plus the minimum detectable coefficient/mean gaps for those settings, and
// a Monte Carlo ODC estimator with bootstrap standard errors for everything
// without a closed form.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swaptest/core.hpp"
#include "swaptest/normal.hpp"
#include "swaptest/rng.hpp"
#include "swaptest/scores.hpp"

namespace swaptest {

struct PowerQuery {
    std::size_t n = 0;
    double alpha = 0.1;
    double beta = 0.1;
    double tau = 0.0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("PowerQuery: n must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("PowerQuery: alpha must lie in (0,1)");
        }
        if (!(beta > 0.0 && beta < 1.0)) {
            throw std::invalid_argument("PowerQuery: beta must lie in (0,1)");
        }
        if (!(tau >= 0.0) || !std::isfinite(tau)) {
            throw std::invalid_argument("PowerQuery: tau must be a finite value >= 0");
        }
    }
};

inline double rho_n(const PowerQuery& q) {
    q.validate();
    const double n = static_cast<double>(q.n);
    return 2.0 * std::exp(-n * q.beta * q.beta) + std::sqrt(std::log(2.0 / q.alpha) / n) +
           q.tau;
}

namespace detail {
inline double norm2_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("power: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}
}  // namespace detail

/// Magnitude of the ODC deviation for the absolute-residual score under
/// y = x^T theta* + N(0, sigma^2), x ~ N(0, I).
inline double odc_deviation_linear(std::span<const double> theta_star,
                                   std::span<const double> theta_hat, double sigma,
                                   const FeaturePair& pair) {
    if (!(sigma > 0.0)) throw std::invalid_argument("odc_deviation_linear: sigma must be > 0");
    if (theta_star.size() != theta_hat.size()) {
        throw std::invalid_argument("odc_deviation_linear: dimension mismatch");
    }
    pair.validate(theta_hat.size());
    const std::vector<double> swapped = swap_coordinates(theta_hat, pair.i, pair.j);
    const double s1 = std::sqrt(sigma * sigma + detail::norm2_diff(theta_star, theta_hat));
    const double s2 = std::sqrt(sigma * sigma + detail::norm2_diff(theta_star, swapped));
    return (2.0 / M_PI) * std::atan(std::abs(s1 - s2) / (s1 + s2));
}

/// Closed-form ODC deviation for the margin score under the two-component
/// Gaussian mixture x ~ N(y mu, I), y in {-1,+1}.
inline double odc_deviation_binary(std::span<const double> mu,
                                   std::span<const double> theta_hat,
                                   const FeaturePair& pair) {
    if (mu.size() != theta_hat.size()) {
        throw std::invalid_argument("odc_deviation_binary: dimension mismatch");
    }
    pair.validate(theta_hat.size());
    double norm2 = 0.0;
    for (double v : theta_hat) norm2 += v * v;
    if (!(norm2 > 0.0)) throw std::invalid_argument("odc_deviation_binary: zero model estimate");
    const double lambda = std::abs((theta_hat[pair.i] - theta_hat[pair.j]) *
                                   (mu[pair.i] - mu[pair.j])) /
                          (kSqrt2 * std::sqrt(norm2));
    return norm_cdf(lambda) - 0.5;
}

/// Minimum |theta*_i - theta*_j| guaranteeing type-II error <= beta in the
/// linear setting. nullopt when the side condition tan(pi/2 rho_n) <= 1/2
/// fails or the estimate cannot separate the pair.
inline std::optional<double> min_gap_linear(const PowerQuery& q,
                                            std::span<const double> theta_star,
                                            std::span<const double> theta_hat, double sigma,
                                            const FeaturePair& pair) {
    if (!(sigma > 0.0)) throw std::invalid_argument("min_gap_linear: sigma must be > 0");
    if (theta_star.size() != theta_hat.size()) {
        throw std::invalid_argument("min_gap_linear: dimension mismatch");
    }
    pair.validate(theta_hat.size());
    const double rho = rho_n(q);
    if (!(rho < 1.0)) return std::nullopt;  // tangent argument past pi/2
    const double t = std::tan(0.5 * M_PI * rho);
    if (!(t <= 0.5)) return std::nullopt;
    const double gap_hat = std::abs(theta_hat[pair.i] - theta_hat[pair.j]);
    if (gap_hat == 0.0) return std::nullopt;
    const double err2 = detail::norm2_diff(theta_star, theta_hat);
    return (2.0 * t / (1.0 - 2.0 * t)) * (sigma * sigma + err2) / gap_hat;
}

/// Minimum |mu_i - mu_j| for the mixture setting (the analysis fixes tau=0).
/// nullopt when rho_n >= 1/2 or the estimate cannot separate the pair.
inline std::optional<double> min_gap_binary(const PowerQuery& q,
                                            std::span<const double> theta_hat,
                                            const FeaturePair& pair) {
    pair.validate(theta_hat.size());
    PowerQuery q0 = q;
    q0.tau = 0.0;
    const double rho = rho_n(q0);
    if (!(rho < 0.5)) return std::nullopt;
    const double gap_hat = std::abs(theta_hat[pair.i] - theta_hat[pair.j]);
    if (gap_hat == 0.0) return std::nullopt;
    double norm2 = 0.0;
    for (double v : theta_hat) norm2 += v * v;
    return norm_quantile(0.5 + rho) * kSqrt2 * std::sqrt(norm2) / gap_hat;
}

// --------------------------------------------------------------------------
// Empirical ODC machinery.
// --------------------------------------------------------------------------

struct OdcEstimate {
    double deviation = 0.0;
    double std_error = 0.0;
    std::size_t n_mc = 0;
};

namespace detail {

/// Trapezoidal integral of Fw(Gw^-1(u)) - u over the grid u_k = k/n, with
/// the left-continuous generalized inverse Gw^-1(u) = inf{t : Gw(t) >= u}.
/// Inputs are sorted sample values with integer multiplicities summing to n.
inline double weighted_odc_deviation(const std::vector<double>& f_sorted,
                                     const std::vector<std::uint32_t>& f_weight,
                                     const std::vector<double>& g_sorted,
                                     const std::vector<std::uint32_t>& g_weight,
                                     std::size_t n) {
    const double dn = static_cast<double>(n);
    std::size_t ig = 0;
    std::uint64_t cum_g = g_weight.empty() ? 0 : g_weight[0];
    std::size_t fi = 0;
    std::uint64_t cum_f = 0;
    double sum = 0.0;  // interior trapezoid weights are 1, endpoints 1/2; h(0) = 0
    for (std::size_t k = 1; k <= n; ++k) {
        while (cum_g < k) {
            ++ig;
            cum_g += g_weight[ig];
        }
        const double t = g_sorted[ig];
        while (fi < f_sorted.size() && f_sorted[fi] <= t) {
            cum_f += f_weight[fi];
            ++fi;
        }
        const double h = (static_cast<double>(cum_f) - static_cast<double>(k)) / dn;
        sum += (k == n) ? 0.5 * h : h;
    }
    return sum / dn;
}

inline std::vector<std::uint32_t> unit_weights(std::size_t n) {
    return std::vector<std::uint32_t>(n, 1);
}

}  // namespace detail

/// Signed empirical ODC deviation of two score samples (unit weights).
inline double ecdf_odc_deviation(std::vector<double> f, std::vector<double> g) {
    if (f.size() != g.size() || f.empty()) {
        throw std::invalid_argument("ecdf_odc_deviation: samples must be equal-size, nonempty");
    }
    std::sort(f.begin(), f.end());
    std::sort(g.begin(), g.end());
    const std::size_t n = f.size();
    return detail::weighted_odc_deviation(f, detail::unit_weights(n), g,
                                          detail::unit_weights(n), n);
}

/// All-pairs win rate (1/n^2) sum_k #{l : g_l <= f_k}, the direct estimate of
/// P(T1 >= T2).
inline double pairwise_win_rate(std::vector<double> f, std::vector<double> g) {
    if (f.size() != g.size() || f.empty()) {
        throw std::invalid_argument("pairwise_win_rate: samples must be equal-size, nonempty");
    }
    std::sort(f.begin(), f.end());
    std::sort(g.begin(), g.end());
    const std::size_t n = f.size();
    std::size_t gi = 0;
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        while (gi < n && g[gi] <= f[k]) ++gi;
        total += gi;
    }
    return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n));
}

/// A sampler draws one (features, response) record from a fixed law.
using RecordSampler = std::function<std::pair<std::vector<double>, double>(Rng&)>;

/// Monte Carlo ODC deviation: n_mc scores drawn from each law, empirical
/// CDFs, trapezoidal integration on the 1/n_mc grid, and a 200-resample
/// bootstrap standard error. The original/swapped/bootstrap streams are
/// split deterministically from the seed.
template <typename Score>
OdcEstimate odc_monte_carlo(const Score& score, const RecordSampler& sampler_orig,
                            const RecordSampler& sampler_swap, std::size_t n_mc,
                            std::uint64_t seed) {
    if (n_mc < 100) throw std::invalid_argument("odc_monte_carlo: n_mc must be >= 100");

    Rng rng_f(derive_seed(seed, {stream::kMcOriginal}));
    Rng rng_g(derive_seed(seed, {stream::kMcSwapped}));
    std::vector<double> f(n_mc);
    std::vector<double> g(n_mc);
    for (std::size_t k = 0; k < n_mc; ++k) {
        const auto [xf, yf] = sampler_orig(rng_f);
        f[k] = score(xf, yf);
        const auto [xg, yg] = sampler_swap(rng_g);
        g[k] = score(xg, yg);
    }
    std::sort(f.begin(), f.end());
    std::sort(g.begin(), g.end());

    const auto ones = detail::unit_weights(n_mc);
    OdcEstimate est;
    est.n_mc = n_mc;
    est.deviation = detail::weighted_odc_deviation(f, ones, g, ones, n_mc);

    constexpr std::size_t kResamples = 200;
    Rng rng_boot(derive_seed(seed, {stream::kBootstrap}));
    std::vector<std::uint32_t> wf(n_mc);
    std::vector<std::uint32_t> wg(n_mc);
    std::vector<double> devs(kResamples);
    for (std::size_t b = 0; b < kResamples; ++b) {
        std::fill(wf.begin(), wf.end(), 0u);
        std::fill(wg.begin(), wg.end(), 0u);
        for (std::size_t k = 0; k < n_mc; ++k) {
            ++wf[rng_boot.below(n_mc)];
            ++wg[rng_boot.below(n_mc)];
        }
        devs[b] = detail::weighted_odc_deviation(f, wf, g, wg, n_mc);
    }
    const double mean = std::accumulate(devs.begin(), devs.end(), 0.0) / kResamples;
    double ss = 0.0;
    for (double v : devs) ss += (v - mean) * (v - mean);
    est.std_error = std::sqrt(ss / (kResamples - 1));
    return est;
}

// --------------------------------------------------------------------------
// Record samplers for the two analyzed settings. The "swap" sampler yields
// records whose features already carry the coordinate exchange, matching the
// law of T(X_swap, Y).
// --------------------------------------------------------------------------

inline std::pair<RecordSampler, RecordSampler> linear_setting_samplers(
    std::vector<double> theta_star, double sigma, FeaturePair pair) {
    if (!(sigma > 0.0)) throw std::invalid_argument("linear samplers: sigma must be > 0");
    pair.validate(theta_star.size());
    auto draw = [theta_star, sigma](Rng& rng) {
        std::vector<double> x(theta_star.size());
        for (auto& v : x) v = rng.normal();
        double y = sigma * rng.normal();
        for (std::size_t k = 0; k < x.size(); ++k) y += x[k] * theta_star[k];
        return std::make_pair(std::move(x), y);
    };
    RecordSampler orig = draw;
    RecordSampler swapped = [draw, pair](Rng& rng) {
        auto [x, y] = draw(rng);
        std::swap(x[pair.i], x[pair.j]);
        return std::make_pair(std::move(x), y);
    };
    return {std::move(orig), std::move(swapped)};
}

inline std::pair<RecordSampler, RecordSampler> gmm_setting_samplers(std::vector<double> mu,
                                                                    double q,
                                                                    FeaturePair pair) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("gmm samplers: q must lie in (0,1)");
    pair.validate(mu.size());
    auto draw = [mu, q](Rng& rng) {
        const double y = rng.uniform01() < q ? 1.0 : -1.0;
        std::vector<double> x(mu.size());
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = y * mu[k] + rng.normal();
        return std::make_pair(std::move(x), y);
    };
    RecordSampler orig = draw;
    RecordSampler swapped = [draw, pair](Rng& rng) {
        auto [x, y] = draw(rng);
        std::swap(x[pair.i], x[pair.j]);
        return std::make_pair(std::move(x), y);
    };
    return {std::move(orig), std::move(swapped)};
}

}  // namespace swaptest
