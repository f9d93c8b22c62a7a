#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fockzero/error.hpp"
#include "fockzero/parallel.hpp"
#include "fockzero/randomize.hpp"

using namespace fockzero;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST_CASE("angles are a pure function of seed and index") {
    const auto seq = make_sequence(ScaledSqrtFamily{1.0});
    const auto first = randomize(seq, 42);
    const auto second = randomize(seq, 42);
    second.realize(5000);
    for (std::size_t n = 5000; n >= 1; --n) REQUIRE(first.theta(n) == second.theta(n));
    const auto other = randomize(seq, 43);
    int same = 0;
    for (std::size_t n = 1; n <= 1000; ++n) same += first.theta(n) == other.theta(n) ? 1 : 0;
    CHECK(same == 0);
}

TEST_CASE("angles lie in [0, 2pi)") {
    const auto cfg = randomize(make_sequence(SqrtShiftFamily{0.0}), 123);
    for (std::size_t n = 1; n <= 200000; ++n) {
        const double theta = cfg.theta(n);
        REQUIRE(theta >= 0.0);
        REQUIRE(theta < two_pi);
    }
}

TEST_CASE("parallel and serial realizations agree") {
    const auto cfg = randomize(make_sequence(CriticalFamily{2.0, 2.0}), 99);
    std::vector<double> parallel(100000), serial(100000);
    parallel_for(parallel.size(), [&](std::size_t i) { parallel[i] = cfg.theta(i + 1) + cfg.lambda(i + 1); }, 4);
    const auto fresh = randomize(make_sequence(CriticalFamily{2.0, 2.0}), 99);
    for (std::size_t i = 0; i < serial.size(); ++i) serial[i] = fresh.theta(i + 1) + fresh.lambda(i + 1);
    CHECK(parallel == serial);
}

TEST_CASE("degenerate angles are zero") {
    const auto cfg = randomize(make_sequence(ScaledSqrtFamily{1.0}), 5, AngleMode::degenerate);
    for (std::size_t n = 1; n <= 100; ++n) CHECK(cfg.theta(n) == 0.0);
    CHECK(cfg.point(4) == std::complex<double>(2.0, 0.0));
}

TEST_CASE("Kolmogorov-Smirnov distance of 10^5 angles") {
    const auto cfg = randomize(make_sequence(SqrtShiftFamily{0.0}), 7);
    const auto stat = equidistribution_stat(cfg, std::sqrt(100000.5), 16);
    REQUIRE(stat.count == 100000);
    CHECK(stat.max_rel_dev < 1.628 / std::sqrt(100000.0));
}

TEST_CASE("sector counts") {
    const auto seq = make_sequence(GaussLatticeFamily{1.0});
    const auto cfg = randomize(seq, 11);
    const double r = 30.0;
    CHECK(sector_count(cfg, {r, 0.0, two_pi}) == count_below(seq, r) - 1);
    CHECK(sector_count(cfg, {r, 1.0, 1.0 + two_pi}) == count_below(seq, r) - 1);
    CHECK(sector_count(cfg, {r, 0.0, std::numbers::pi}) + sector_count(cfg, {r, std::numbers::pi, two_pi}) ==
          count_below(seq, r) - 1);
    CHECK(sector_count(cfg, {r, -2.0, 0.5}) == sector_count(cfg, {r, two_pi - 2.0, two_pi + 0.5}));
    CHECK_THROWS_AS(sector_count(cfg, {r, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(sector_count(cfg, {r, 0.0, 7.0}), Error);

    const auto empty = randomize(make_sequence(ExplicitFamily{}), 1);
    CHECK(sector_count(empty, {5.0, 0.0, 1.0}) == 0);
}

TEST_CASE("degenerate angles sit on the boundary of half-open sectors") {
    const auto cfg = randomize(make_sequence(ScaledSqrtFamily{1.0}), 0, AngleMode::degenerate);
    // θ = 0 belongs to (−1, 0] but not to (0, 1].
    CHECK(sector_count(cfg, {10.0, -1.0, 0.0}) == 99);
    CHECK(sector_count(cfg, {10.0, 0.0, 1.0}) == 0);
}

TEST_CASE("quarter sector of 10^5 points") {
    const auto cfg = randomize(make_sequence(SqrtShiftFamily{0.0}), 2024);
    const double r = std::sqrt(100000.5);
    const auto count = static_cast<double>(sector_count(cfg, {r, 0.3, 0.3 + 0.5 * std::numbers::pi}));
    CHECK(std::abs(count - 25000.0) < 4.0 * std::sqrt(100000.0));
}

TEST_CASE("dyadic sectors carry their share of points") {
    const auto seq = make_sequence(SqrtShiftFamily{0.0});
    const double r = std::sqrt(10000.5);
    const double n = 10000.0;
    int good = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto cfg = randomize(seq, seed);
        bool all = true;
        for (int level = 1; level <= 4; ++level) {
            const int pieces = 1 << level;
            for (int i = 0; i < pieces; ++i) {
                const double x = static_cast<double>(i) / pieces;
                const double y = static_cast<double>(i + 1) / pieces;
                const double share = static_cast<double>(sector_count(cfg, {r, two_pi * x, two_pi * y})) / n;
                if (std::abs(share - (y - x)) > 5.0 * std::sqrt(n) / n) all = false;
            }
        }
        good += all ? 1 : 0;
    }
    CHECK(good >= 99);
}

TEST_CASE("rotating every angle leaves sector counts invariant in law") {
    const auto seq = make_sequence(ScaledSqrtFamily{1.0});
    const double r = std::sqrt(2000.5);
    const double shift = 1.234;
    const std::size_t bins = 8;
    std::vector<double> plain(bins, 0.0), rotated(bins, 0.0);
    const int seeds = 200;
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const auto cfg = randomize(seq, seed);
        for (std::size_t b = 0; b < bins; ++b) {
            const double lo = two_pi * static_cast<double>(b) / bins;
            const double hi = two_pi * static_cast<double>(b + 1) / bins;
            plain[b] += static_cast<double>(sector_count(cfg, {r, lo, hi}));
            // Shifting θ by +c and re-binning equals counting the sector shifted by −c.
            rotated[b] += static_cast<double>(sector_count(cfg, {r, lo - shift, hi - shift}));
        }
    }
    // Per-bin totals over all seeds are sums of 2000·200 Bernoulli(1/8) trials.
    const double expected = 2000.0 * seeds / bins;
    const double sd = std::sqrt(2000.0 * seeds * (1.0 / bins) * (1.0 - 1.0 / bins));
    double chi_plain = 0.0, chi_rotated = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        CHECK(std::abs(plain[b] - expected) < 5.0 * sd);
        CHECK(std::abs(rotated[b] - expected) < 5.0 * sd);
        chi_plain += (plain[b] - expected) * (plain[b] - expected) / expected;
        chi_rotated += (rotated[b] - expected) * (rotated[b] - expected) / expected;
    }
    CHECK(chi_square_survival(chi_plain, bins - 1) > 1e-4);
    CHECK(chi_square_survival(chi_rotated, bins - 1) > 1e-4);
}

TEST_CASE("equidistribution statistic") {
    const auto cfg = randomize(make_sequence(SqrtShiftFamily{0.0}), 3);
    const auto stat = equidistribution_stat(cfg, std::sqrt(100000.5), 16);
    CHECK(stat.p_value > 0.01);

    const auto degenerate = randomize(make_sequence(SqrtShiftFamily{0.0}), 3, AngleMode::degenerate);
    CHECK(equidistribution_stat(degenerate, 100.0, 16).p_value < 1e-10);

    const auto single = randomize(make_sequence(ExplicitFamily{{1.0}, 0}), 3);
    CHECK_THROWS_AS(equidistribution_stat(single, 2.0, 2), Error);
    CHECK_THROWS_AS(equidistribution_stat(cfg, 100.0, 1), Error);
}

TEST_CASE("chi-square survival function") {
    // Two degrees of freedom: exp(−x/2).
    for (double x : {0.5, 2.0, 10.0}) CHECK(chi_square_survival(x, 2.0) == doctest::Approx(std::exp(-0.5 * x)));
    CHECK(chi_square_survival(0.0, 5.0) == 1.0);
    CHECK(chi_square_survival(30.5779, 15.0) == doctest::Approx(0.01).epsilon(1e-3));
}
