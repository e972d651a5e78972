#pragma once

// Test-only oracles, independent of the library paths they check:
//   * sampling from a general Gaussian via its Cholesky factor
//   * a two-phase half-space discriminator giving a Monte Carlo lower
//     estimate of the total variation between a Gaussian and its
//     coordinate-swapped version (halfspaces selected on one sample set,
//     estimated on a fresh one, so the sup carries no selection bias)
//   * exact brute-force TV between the uniform fixed-weight binary law and
//     its swapped version, by atom enumeration

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "swaptest/core.hpp"
#include "swaptest/linalg.hpp"
#include "swaptest/rng.hpp"
#include "swaptest/shift_bounds.hpp"

namespace swaptest::testsupport {

inline std::vector<double> sample_gaussian(const GaussianSpec& spec, const Matrix& chol_lower,
                                           Rng& rng) {
    const std::size_t d = spec.dim();
    std::vector<double> z(d);
    for (auto& v : z) v = rng.normal();
    std::vector<double> x(spec.mu);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c <= r; ++c) x[r] += chol_lower(r, c) * z[c];
    }
    return x;
}

struct TvLowerEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// sup_A |P(X in A) - P(X_swap in A)| over random half-spaces A, estimated
/// by simulation. Valid lower bound on the TV distance up to Monte Carlo
/// noise of the reported standard error.
inline TvLowerEstimate halfspace_tv_lower_estimate(const GaussianSpec& spec,
                                                   const FeaturePair& pair,
                                                   std::size_t n_samples,
                                                   std::size_t n_halfspaces,
                                                   std::uint64_t seed) {
    const auto chol = cholesky(spec.sigma);
    if (!chol) throw std::invalid_argument("tv oracle: covariance not positive definite");
    const std::size_t d = spec.dim();
    Rng rng(derive_seed(seed, {0xACE}));

    auto draw_batch = [&](std::vector<std::vector<double>>& a,
                          std::vector<std::vector<double>>& b) {
        a.clear();
        b.clear();
        a.reserve(n_samples);
        b.reserve(n_samples);
        for (std::size_t k = 0; k < n_samples; ++k) {
            a.push_back(sample_gaussian(spec, *chol, rng));
            auto x = sample_gaussian(spec, *chol, rng);
            std::swap(x[pair.i], x[pair.j]);
            b.push_back(std::move(x));
        }
    };

    std::vector<std::vector<double>> phase1_orig, phase1_swap;
    draw_batch(phase1_orig, phase1_swap);

    // random unit directions, offsets anchored at phase-1 points
    std::vector<std::vector<double>> directions(n_halfspaces, std::vector<double>(d));
    std::vector<double> offsets(n_halfspaces);
    for (std::size_t h = 0; h < n_halfspaces; ++h) {
        double norm2 = 0.0;
        for (auto& v : directions[h]) {
            v = rng.normal();
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : directions[h]) v *= inv;
        const auto& anchor =
            (rng.coin() ? phase1_orig : phase1_swap)[rng.below(n_samples)];
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += directions[h][c] * anchor[c];
        offsets[h] = dot;
    }

    auto below_fraction = [&](const std::vector<std::vector<double>>& points, std::size_t h) {
        std::size_t hits = 0;
        for (const auto& x : points) {
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += directions[h][c] * x[c];
            if (dot <= offsets[h]) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(points.size());
    };

    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t h = 0; h < n_halfspaces; ++h) {
        const double gap =
            std::abs(below_fraction(phase1_orig, h) - below_fraction(phase1_swap, h));
        if (gap > best_gap) {
            best_gap = gap;
            best = h;
        }
    }

    std::vector<std::vector<double>> phase2_orig, phase2_swap;
    draw_batch(phase2_orig, phase2_swap);
    const double p1 = below_fraction(phase2_orig, best);
    const double p2 = below_fraction(phase2_swap, best);
    const double n = static_cast<double>(n_samples);
    TvLowerEstimate out;
    out.estimate = std::abs(p1 - p2);
    out.std_error = std::sqrt(p1 * (1.0 - p1) / n + p2 * (1.0 - p2) / n);
    return out;
}

inline GaussianSpec random_pd_spec(std::size_t d, Rng& rng) {
    Matrix a(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) a(r, c) = rng.normal();
    }
    Matrix sigma(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += a(r, k) * a(c, k);
            sigma(r, c) = s;
        }
        sigma(r, r) += 0.3;
    }
    std::vector<double> mu(d);
    for (auto& v : mu) v = 2.0 * rng.normal();
    return {std::move(mu), std::move(sigma)};
}

/// Exact TV between the uniform law on {x in {0,1}^d : sum x = m} and its
/// coordinate-swapped law, by enumerating all atoms.
inline double subset_binary_swap_tv(std::size_t d, std::size_t m, const FeaturePair& pair) {
    std::vector<std::uint32_t> atoms;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) == m) atoms.push_back(mask);
    }
    auto swap_mask = [&](std::uint32_t mask) {
        const std::uint32_t bi = (mask >> pair.i) & 1u;
        const std::uint32_t bj = (mask >> pair.j) & 1u;
        mask &= ~((1u << pair.i) | (1u << pair.j));
        mask |= bi << pair.j;
        mask |= bj << pair.i;
        return mask;
    };
    const double p = 1.0 / static_cast<double>(atoms.size());
    double tv = 0.0;
    for (std::uint32_t atom : atoms) {
        // P_swap(atom) = P(swap(atom)); the swapped atom stays in the set
        double q = 0.0;
        const std::uint32_t pre = swap_mask(atom);
        for (std::uint32_t other : atoms) {
            if (other == pre) {
                q = p;
                break;
            }
        }
        tv += std::abs(p - q);
    }
    return 0.5 * tv;
}

}  // namespace swaptest::testsupport
