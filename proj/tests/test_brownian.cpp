#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "manakov/brownian.hpp"

using namespace manakov;

TEST_CASE("same seed gives bit-identical paths") {
    const BrownianPath p = sample_path(42, 128, 0.01);
    const BrownianPath q = sample_path(42, 128, 0.01);
    REQUIRE(p.n_steps() == q.n_steps());
    for (int n = 0; n < p.n_steps(); ++n)
        for (int k = 0; k < 3; ++k) CHECK(p.increments[n][k] == q.increments[n][k]);
    const BrownianPath r = sample_path(43, 128, 0.01);
    bool any_diff = false;
    for (int n = 0; n < p.n_steps(); ++n)
        for (int k = 0; k < 3; ++k) any_diff = any_diff || p.increments[n][k] != r.increments[n][k];
    CHECK(any_diff);
}

TEST_CASE("chi recovers unit-variance draws") {
    const BrownianPath p = sample_path(7, 10, 0.25);
    for (int n = 0; n < 10; ++n)
        for (int k = 0; k < 3; ++k)
            CHECK(p.chi(n)[k] == doctest::Approx(p.increments[n][k] / 0.5).epsilon(1e-15));
}

TEST_CASE("monte carlo mean and variance of the normalized draws") {
    // 1e6 draws; the 5-sigma band for the mean is 5/sqrt(1e6) = 5e-3 and
    // the variance estimate lands within 1e-2 with comparable margin.
    const int n = 1000000;
    const BrownianPath p = sample_path(2026, n, 0.04);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += p.chi(i)[0];
    mean /= n;
    CHECK(std::abs(mean) < 5e-3);
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = p.chi(i)[0] - mean;
        var += d * d;
    }
    var /= n - 1;
    CHECK(std::abs(var - 1.0) < 1e-2);
}

TEST_CASE("kolmogorov-smirnov law check at significance 0.001") {
    const int n = 100000;
    const BrownianPath p = sample_path(99, n / 3 + 1, 1.0);
    std::vector<double> draws;
    draws.reserve(n);
    for (int i = 0; draws.size() < static_cast<std::size_t>(n); ++i)
        for (int k = 0; k < 3 && draws.size() < static_cast<std::size_t>(n); ++k)
            draws.push_back(p.chi(i)[k]);
    std::sort(draws.begin(), draws.end());
    auto std_normal_cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    double d_stat = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = std_normal_cdf(draws[i]);
        d_stat = std::max(d_stat, std::abs(cdf - (i + 1.0) / n));
        d_stat = std::max(d_stat, std::abs(cdf - static_cast<double>(i) / n));
    }
    // Asymptotic critical value c(alpha)/sqrt(n), c(0.001) = 1.9495.
    CHECK(d_stat < 1.9495 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("coarsen factor 1 is the identity") {
    const BrownianPath p = sample_path(5, 16, 0.125);
    const BrownianPath c = coarsen(p, 1);
    CHECK(c.dt == p.dt);
    CHECK(c.level == p.level);
    for (int i = 0; i < 16; ++i)
        for (int k = 0; k < 3; ++k) CHECK(c.increments[i][k] == p.increments[i][k]);
}

TEST_CASE("coarsen rejects non-divisible factors") {
    const BrownianPath p = sample_path(5, 15, 0.125);
    CHECK_THROWS_AS(coarsen(p, 2), std::invalid_argument);
    CHECK_THROWS_AS(coarsen(p, 0), std::invalid_argument);
}

TEST_CASE("every coarse increment is the exact pair sum of its children") {
    const BrownianPath p = sample_path(11, 64, 0.5);
    const BrownianPath c = coarsen(p, 2);
    CHECK(c.dt == 1.0);
    CHECK(c.level == 1);
    for (int i = 0; i < c.n_steps(); ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(c.increments[i][k] == p.increments[2 * i][k] + p.increments[2 * i + 1][k]);
}

TEST_CASE("dyadic coarsening composes bit-for-bit") {
    const BrownianPath p = sample_path(123, 256, 0.001);
    const BrownianPath once = coarsen(p, 4);
    const BrownianPath twice = coarsen(coarsen(p, 2), 2);
    CHECK(once.level == twice.level);
    CHECK(once.dt == twice.dt);
    REQUIRE(once.n_steps() == twice.n_steps());
    for (int i = 0; i < once.n_steps(); ++i)
        for (int k = 0; k < 3; ++k) CHECK(once.increments[i][k] == twice.increments[i][k]);
}

TEST_CASE("total increment is preserved across coarsening") {
    const BrownianPath p = sample_path(321, 512, 0.01);
    const BrownianPath c = coarsen(p, 8);
    for (int k = 0; k < 3; ++k) {
        // Independent oracle: rebuild each window-of-8 sum by pairwise
        // halving, the grouping dyadic coarsening uses, and accumulate.
        double fine_grouped = 0.0;
        for (int i = 0; i < c.n_steps(); ++i) {
            double pair[4];
            for (int q = 0; q < 4; ++q)
                pair[q] = p.increments[8 * i + 2 * q][k] + p.increments[8 * i + 2 * q + 1][k];
            const double window = (pair[0] + pair[1]) + (pair[2] + pair[3]);
            CHECK(c.increments[i][k] == window);
            fine_grouped += window;
        }
        double coarse_total = 0.0;
        for (int i = 0; i < c.n_steps(); ++i) coarse_total += c.increments[i][k];
        CHECK(fine_grouped == coarse_total);

        // And within accumulated roundoff of the flat fine sum.
        double fine_flat = 0.0;
        for (int i = 0; i < p.n_steps(); ++i) fine_flat += p.increments[i][k];
        CHECK(coarse_total == doctest::Approx(fine_flat).epsilon(1e-13));
    }
}

TEST_CASE("non-dyadic window sums follow index order") {
    const BrownianPath p = sample_path(8, 12, 0.25);
    const BrownianPath c = coarsen(p, 3);
    CHECK(c.n_steps() == 4);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 3; ++k) {
            const double expected = (p.increments[3 * i][k] + p.increments[3 * i + 1][k]) +
                                    p.increments[3 * i + 2][k];
            CHECK(c.increments[i][k] == expected);
        }
}

TEST_CASE("binary dump round-trips") {
    const BrownianPath p = sample_path(77, 33, 0.3);
    const std::string file = "path_dump_test.bin";
    write_path_binary(p, file);
    const BrownianPath q = read_path_binary(file);
    CHECK(q.seed == p.seed);
    CHECK(q.dt == p.dt);
    REQUIRE(q.n_steps() == p.n_steps());
    for (int i = 0; i < p.n_steps(); ++i)
        for (int k = 0; k < 3; ++k) CHECK(q.increments[i][k] == p.increments[i][k]);
    std::remove(file.c_str());
}
