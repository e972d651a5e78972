#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "swaptest/core.hpp"
#include "swaptest/simgen.hpp"

using namespace swaptest;

TEST_CASE("generators are bit-reproducible per seed") {
    const auto a = gen_linear(50, {1.0, 2.0, 3.0}, 0.5, 313);
    const auto b = gen_linear(50, {1.0, 2.0, 3.0}, 0.5, 313);
    const auto c = gen_linear(50, {1.0, 2.0, 3.0}, 0.5, 314);
    CHECK(a.features() == b.features());
    CHECK(a.responses() == b.responses());
    CHECK(a.features() != c.features());

    const auto g1 = gen_gmm(40, {0.1, 0.9}, 0.3, 5);
    const auto g2 = gen_gmm(40, {0.1, 0.9}, 0.3, 5);
    CHECK(g1.features() == g2.features());

    const auto s1 = gen_subset_binary(40, 6, 3, std::vector<double>(6, 1.0), 1.0, 5);
    const auto s2 = gen_subset_binary(40, 6, 3, std::vector<double>(6, 1.0), 1.0, 5);
    CHECK(s1.features() == s2.features());
}

TEST_CASE("generator domain checks") {
    CHECK_THROWS_AS(gen_linear(10, {1.0, 2.0}, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_linear(0, {1.0, 2.0}, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_quadratic_null(10, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_gmm(10, {1.0, 2.0}, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_gmm(10, {1.0, 2.0}, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_subset_binary(10, 4, 0, std::vector<double>(4, 1.0), 1.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(gen_subset_binary(10, 4, 4, std::vector<double>(4, 1.0), 1.0, 1),
                    std::invalid_argument);
}

TEST_CASE("linear generator: centered noise") {
    const std::vector<double> theta{1.0, 1.0, 2.0, 2.0};
    const double sigma = 1.5;
    const std::size_t n = 20000;
    const auto data = gen_linear(n, theta, sigma, 99);
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double fit = 0.0;
        const auto x = data.row(r);
        for (std::size_t c = 0; c < theta.size(); ++c) fit += x[c] * theta[c];
        sum += data.response(r) - fit;
    }
    CHECK(std::abs(sum / static_cast<double>(n)) <
          4.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("quadratic-null conditional mean is swap-invariant") {
    const std::size_t d = 10;
    const auto data = gen_quadratic_null(1000, d, 2);
    // recompute x^T S x directly and after swapping any pair
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto x = data.row(r);
        double sum = 0.0;
        double sumsq = 0.0;
        for (double v : x) {
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum * sum + sumsq;
        const auto swapped = swap_coordinates(x, r % d, (r * 7 + 3) % d);
        double s2 = 0.0;
        double ss2 = 0.0;
        for (double v : swapped) {
            s2 += v;
            ss2 += v * v;
        }
        CHECK_THAT(s2 * s2 + ss2, Catch::Matchers::WithinRel(mean, 1e-12));
    }
    // and d=2 algebra: x^T S x = 2a^2 + 2b^2 + 2ab symmetric in (a,b)
    const std::vector<double> xy{1.25, -0.5};
    const double direct = (xy[0] + xy[1]) * (xy[0] + xy[1]) + xy[0] * xy[0] + xy[1] * xy[1];
    CHECK_THAT(direct, Catch::Matchers::WithinRel(
                           2 * xy[0] * xy[0] + 2 * xy[1] * xy[1] + 2 * xy[0] * xy[1], 1e-14));
}

TEST_CASE("gmm generator: label frequency and class-conditional means") {
    const std::vector<double> mu{0.5, -1.0, 2.0};
    const double q = 0.3;
    const std::size_t n = 30000;
    const auto data = gen_gmm(n, mu, q, 17);
    double label_sum = 0.0;
    std::vector<double> pos_mean(mu.size(), 0.0);
    std::size_t pos_count = 0;
    for (std::size_t r = 0; r < n; ++r) {
        label_sum += data.response(r);
        if (data.response(r) > 0) {
            ++pos_count;
            const auto x = data.row(r);
            for (std::size_t c = 0; c < mu.size(); ++c) pos_mean[c] += x[c];
        }
    }
    CHECK(std::abs(label_sum / n - (2.0 * q - 1.0)) < 4.0 / std::sqrt(static_cast<double>(n)));
    for (std::size_t c = 0; c < mu.size(); ++c) {
        CHECK(std::abs(pos_mean[c] / pos_count - mu[c]) <
              4.0 / std::sqrt(static_cast<double>(pos_count)));
    }
}

TEST_CASE("subset-binary generator: exact row sums and uniform patterns") {
    const std::size_t d = 4;
    const std::size_t m = 2;
    const std::size_t n = 30000;
    const auto data = gen_subset_binary(n, d, m, {1.0, 1.0, 2.0, 2.0}, 1.0, 23);
    std::map<int, int> pattern_counts;
    std::vector<double> marginals(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto x = data.row(r);
        int sum = 0;
        int mask = 0;
        for (std::size_t c = 0; c < d; ++c) {
            CHECK((x[c] == 0.0 || x[c] == 1.0));
            if (x[c] == 1.0) {
                ++sum;
                mask |= 1 << c;
                marginals[c] += 1.0;
            }
        }
        REQUIRE(sum == static_cast<int>(m));
        ++pattern_counts[mask];
    }
    REQUIRE(pattern_counts.size() == 6);  // C(4,2) atoms all appear
    const double p = 1.0 / 6.0;
    const double tol = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    for (const auto& [mask, count] : pattern_counts) {
        CHECK(std::abs(static_cast<double>(count) / n - p) < tol);
    }
    // marginal P(x_i = 1) = m/d
    for (std::size_t c = 0; c < d; ++c) {
        CHECK(std::abs(marginals[c] / n - 0.5) < 4.0 * std::sqrt(0.25 / n));
    }
}

TEST_CASE("theta draws are seed-deterministic with the right spread") {
    const std::vector<double> center{1.0, 2.0, 3.0};
    const auto a = draw_theta(center, 0.0, 9);
    CHECK(a == center);
    const auto b = draw_theta(center, 2.0, 9);
    CHECK(b == draw_theta(center, 2.0, 9));
    CHECK(b != center);
}

TEST_CASE("GeneratorSpec dispatches by kind") {
    GeneratorSpec spec;
    spec.seed = 3;
    spec.params = QuadraticNullParams{3};
    CHECK(spec.generate(10).dim() == 3);
    spec.params = LinearParams{{1.0, 2.0}, 1.0};
    const auto viaspec = spec.generate(10);
    const auto direct = gen_linear(10, {1.0, 2.0}, 1.0, 3);
    CHECK(viaspec.features() == direct.features());
}
