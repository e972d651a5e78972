#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "swaptest/normal.hpp"
#include "swaptest/rng.hpp"

using namespace swaptest;

TEST_CASE("normal CDF reference values") {
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK_THAT(norm_cdf(1.0), Catch::Matchers::WithinAbs(0.8413447460685429, 1e-14));
    CHECK_THAT(norm_cdf(-1.959963984540054), Catch::Matchers::WithinAbs(0.025, 1e-13));
    CHECK_THAT(norm_cdf(3.0), Catch::Matchers::WithinAbs(0.9986501019683699, 1e-14));
}

TEST_CASE("quantile round trip |Phi(Phi^-1(u)) - u| < 1e-10 on a dense grid") {
    // log-spaced into both tails plus a uniform sweep of the bulk
    std::vector<double> grid;
    for (double u = 1e-8; u < 0.5; u *= 3.1623) {
        grid.push_back(u);
        grid.push_back(1.0 - u);
    }
    for (double u = 0.001; u < 0.9995; u += 0.001) grid.push_back(u);
    for (double u : grid) {
        const double x = norm_quantile(u);
        CHECK(std::abs(norm_cdf(x) - u) < 1e-10);
    }
}

TEST_CASE("quantile reference values") {
    CHECK_THAT(norm_quantile(0.975), Catch::Matchers::WithinAbs(1.9599639845400545, 1e-12));
    CHECK_THAT(norm_quantile(0.5), Catch::Matchers::WithinAbs(0.0, 1e-14));
    CHECK_THAT(norm_quantile(0.8413447460685429), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(norm_quantile(-0.2), std::domain_error);
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(42);
    Rng b(42);
    Rng c(43);
    bool all_equal_c = true;
    for (int k = 0; k < 64; ++k) {
        const std::uint64_t va = a.next();
        CHECK(va == b.next());
        if (va != c.next()) all_equal_c = false;
    }
    CHECK_FALSE(all_equal_c);
}

TEST_CASE("uniform01 lies strictly inside (0,1)") {
    Rng rng(7);
    for (int k = 0; k < 10000; ++k) {
        const double u = rng.uniform01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("below(n) is in range and roughly uniform") {
    Rng rng(99);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) ++counts[rng.below(10)];
    for (int c : counts) {
        CHECK(c > draws / 10 - 600);
        CHECK(c < draws / 10 + 600);
    }
}

TEST_CASE("normal() has the right first two moments") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("derive_seed is stable and context-sensitive") {
    // frozen regression values: the seeding scheme is part of the artifact
    CHECK(derive_seed(0, {}) == split_mix(0));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
    const std::uint64_t frozen = derive_seed(12345, {stream::kTie, 0, 1});
    CHECK(frozen == derive_seed(12345, {stream::kTie, 0, 1}));
}
