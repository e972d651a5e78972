#pragma once

// Feature-distribution shift bounds tau_x: an upper bound on the total
// variation distance between L(X) and the law of X with coordinates i,j
// swapped. Three routes:
//   * Gaussian features: the KL/Pinsker closed form
//       1/2 [ tr(-I + P S^-1 P S) + (mu - P mu)^T S^-1 (mu - P mu) ]^(1/2)
//     evaluated through a Cholesky factorization, never an explicit inverse.
//   * Uniform binary vectors with a fixed number of ones: exactly 0.
//   * A recorded user declaration of exchangeability: 0, attributed.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "swaptest/core.hpp"
#include "swaptest/linalg.hpp"

namespace swaptest {

struct GaussianSpec {
    std::vector<double> mu;
    Matrix sigma;

    std::size_t dim() const { return mu.size(); }

    void validate() const {
        if (mu.size() < 2) throw std::invalid_argument("GaussianSpec: dimension must be >= 2");
        if (sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
            throw std::invalid_argument("GaussianSpec: covariance shape does not match mean");
        }
        for (double v : mu) {
            if (!std::isfinite(v)) throw std::invalid_argument("GaussianSpec: non-finite mean");
        }
        double scale = 1.0;
        for (std::size_t r = 0; r < sigma.rows(); ++r) {
            scale = std::max(scale, std::abs(sigma(r, r)));
        }
        for (std::size_t r = 0; r < sigma.rows(); ++r) {
            for (std::size_t c = r + 1; c < sigma.cols(); ++c) {
                if (std::abs(sigma(r, c) - sigma(c, r)) > 1e-9 * scale) {
                    throw std::invalid_argument("GaussianSpec: covariance not symmetric");
                }
            }
        }
    }
};

enum class ShiftProvenance { GaussianKlPinsker, UniformBinaryExact, UserSupplied };

inline std::string to_string(ShiftProvenance p) {
    switch (p) {
        case ShiftProvenance::GaussianKlPinsker: return "gaussian-kl-pinsker";
        case ShiftProvenance::UniformBinaryExact: return "uniform-binary-exact";
        case ShiftProvenance::UserSupplied: return "user-supplied";
    }
    return "unknown";
}

struct ShiftBound {
    double value = 0.0;
    ShiftProvenance provenance = ShiftProvenance::UserSupplied;
    std::string declaration;
};

namespace detail {
// sigma with rows i,j and columns i,j exchanged, i.e. P S P.
inline Matrix swap_rows_cols(const Matrix& sigma, std::size_t i, std::size_t j) {
    const std::size_t d = sigma.rows();
    Matrix out(d, d);
    auto map = [&](std::size_t k) { return k == i ? j : (k == j ? i : k); };
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) out(r, c) = sigma(map(r), map(c));
    }
    return out;
}
}  // namespace detail

/// KL/Pinsker upper bound on d_TV(L(X), L(X_swap(i,j))) for X ~ N(mu, sigma).
/// The trace term tr(-I + P S^-1 P S) is computed by solving d linear systems
/// against the factorized sigma. Rounding can leave the provably nonnegative
/// radicand slightly negative; magnitudes up to 1e-10 are clamped to zero and
/// anything larger is an internal-consistency failure.
inline ShiftBound gaussian_swap_bound(const GaussianSpec& spec, const FeaturePair& pair) {
    spec.validate();
    pair.validate(spec.dim());
    const std::size_t d = spec.dim();

    const auto chol = cholesky(spec.sigma);
    if (!chol) {
        throw std::invalid_argument("gaussian_swap_bound: covariance is not positive definite");
    }

    if (pair.degenerate()) {
        return {0.0, ShiftProvenance::GaussianKlPinsker, ""};
    }

    // tr(S^-1 C) - d  with C = P S P, column by column.
    const Matrix swapped = detail::swap_rows_cols(spec.sigma, pair.i, pair.j);
    double trace = 0.0;
    std::vector<double> col(d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) col[r] = swapped(r, c);
        const auto solved = cholesky_solve(*chol, col);
        trace += solved[c];
    }
    const double trace_term = trace - static_cast<double>(d);

    // (mu - P mu)^T S^-1 (mu - P mu); the difference vector is supported on
    // the two swapped coordinates.
    std::vector<double> diff(d, 0.0);
    diff[pair.i] = spec.mu[pair.i] - spec.mu[pair.j];
    diff[pair.j] = spec.mu[pair.j] - spec.mu[pair.i];
    const auto solved = cholesky_solve(*chol, diff);
    double quad = 0.0;
    for (std::size_t k = 0; k < d; ++k) quad += diff[k] * solved[k];

    double radicand = trace_term + quad;
    if (radicand < 0.0) {
        if (radicand < -1e-10) {
            throw std::runtime_error(
                "gaussian_swap_bound: negative KL radicand beyond rounding tolerance");
        }
        radicand = 0.0;
    }
    return {0.5 * std::sqrt(radicand), ShiftProvenance::GaussianKlPinsker, ""};
}

/// Fixed-weight binary design: features uniform over
/// {x in {0,1}^d : sum x = m}. Swapping coordinates permutes equiprobable
/// atoms, so the swapped law equals the original and the bound is exactly
/// zero. The caller asserts the sampling scheme.
inline ShiftBound uniform_binary_bound() {
    return {0.0, ShiftProvenance::UniformBinaryExact, ""};
}

/// Records a user's exchangeability claim and returns the zero bound. An
/// empty declaration is accepted but reported as unattributed.
inline ShiftBound exchangeable_zero_bound(std::string declaration) {
    if (declaration.empty()) declaration = "(unattributed)";
    return {0.0, ShiftProvenance::UserSupplied, std::move(declaration)};
}

/// {"mu": [...], "sigma": [[...], ...]}
inline GaussianSpec gaussian_spec_from_json(const nlohmann::json& j) {
    if (!j.contains("mu") || !j.contains("sigma")) {
        throw std::invalid_argument("GaussianSpec JSON needs keys 'mu' and 'sigma'");
    }
    std::vector<double> mu = j.at("mu").get<std::vector<double>>();
    const auto& rows = j.at("sigma");
    if (!rows.is_array() || rows.size() != mu.size()) {
        throw std::invalid_argument("GaussianSpec JSON: sigma must be a d x d array");
    }
    Matrix sigma(mu.size(), mu.size());
    for (std::size_t r = 0; r < mu.size(); ++r) {
        const auto row = rows.at(r).get<std::vector<double>>();
        if (row.size() != mu.size()) {
            throw std::invalid_argument("GaussianSpec JSON: sigma row " + std::to_string(r) +
                                        " has wrong length");
        }
        for (std::size_t c = 0; c < mu.size(); ++c) sigma(r, c) = row[c];
    }
    GaussianSpec spec{std::move(mu), std::move(sigma)};
    spec.validate();
    return spec;
}

}  // namespace swaptest
