#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <cmath>
#include <numbers>
#include <thread>

#include "fockzero/error.hpp"
#include "fockzero/sequences.hpp"

using namespace fockzero;

namespace {

// Brute-force n(t) for the lattice √(aπ)(ℤ + iℤ), origin included.
std::size_t lattice_count(double a, double t) {
    const double bound = t * t / (a * std::numbers::pi);
    const auto m = static_cast<long>(std::ceil(std::sqrt(bound))) + 1;
    std::size_t count = 0;
    for (long x = -m; x <= m; ++x) {
        for (long y = -m; y <= m; ++y) {
            if (static_cast<double>(x * x + y * y) < bound) ++count;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("closed-form families") {
    CHECK(make_sequence(ScaledSqrtFamily{2.0}).lambda(4) == doctest::Approx(4.0));
    CHECK(make_sequence(ScaledSqrtFamily{2.0}).lambda(1000) == doctest::Approx(2.0 * std::sqrt(1000.0)));
    CHECK(make_sequence(SqrtShiftFamily{0.0}).lambda(1) == doctest::Approx(1.0));
    CHECK(make_sequence(SqrtShiftFamily{0.5}).lambda(3) == doctest::Approx(std::sqrt(3.5)));

    const auto critical = make_sequence(CriticalFamily{2.0, 2.0});
    for (std::size_t n : {1u, 2u, 10u, 12345u}) {
        const double nn = static_cast<double>(n);
        const double expected = nn + 2.0 * std::sqrt(nn) * std::pow(std::log(nn), 2.0);
        CHECK(critical.lambda(n) * critical.lambda(n) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_sequence(SqrtShiftFamily{-1.0}), Error);
    CHECK_THROWS_AS(make_sequence(ScaledSqrtFamily{0.0}), Error);
    CHECK_THROWS_AS(make_sequence(GaussLatticeFamily{-2.0}), Error);
    CHECK_THROWS_AS(make_sequence(CriticalFamily{1.0, 1.5}), Error);
    try {
        make_sequence(ExplicitFamily{{1.0, 3.0, 2.0}, 0});
        FAIL("non-monotone list accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
    }
    try {
        make_sequence(CriticalFamily{0.0, 2.0});
        FAIL("a = 0 accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("lattice moduli start with the unit shell") {
    const auto lattice = make_sequence(GaussLatticeFamily{1.0});
    CHECK(lattice.origin_multiplicity() == 1);
    const double s = std::sqrt(std::numbers::pi);
    for (std::size_t n = 1; n <= 4; ++n) CHECK(lattice.lambda(n) == doctest::Approx(s));
    for (std::size_t n = 5; n <= 8; ++n) CHECK(lattice.lambda(n) == doctest::Approx(s * std::sqrt(2.0)));
    CHECK(lattice.lambda(9) == doctest::Approx(2.0 * s));
}

TEST_CASE("count_below examples") {
    CHECK(count_below(make_sequence(SqrtShiftFamily{0.0}), 2.0) == 3);
    const auto scaled = make_sequence(ScaledSqrtFamily{3.0});
    CHECK(count_below(scaled, scaled.lambda(1)) == 0);
    CHECK(count_below(scaled, 0.5 * scaled.lambda(1)) == 0);
    CHECK(count_below(make_sequence(GaussLatticeFamily{1.0}), 2.0 * std::sqrt(std::numbers::pi)) == 9);
    CHECK_THROWS_AS(count_below(scaled, 0.0), Error);
    CHECK_THROWS_AS(count_below(scaled, -1.0), Error);
}

TEST_CASE("lattice counts match brute-force enumeration") {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto lattice = make_sequence(GaussLatticeFamily{a});
        for (double t : {0.5, 3.0, 7.3, 10.0, 25.0, 40.0}) {
            CHECK(count_below(lattice, t) == lattice_count(a, t));
        }
    }
}

TEST_CASE("lattice counting tends to t^2/a") {
    for (double a : {1.0, 2.0}) {
        const auto lattice = make_sequence(GaussLatticeFamily{a});
        const double t = 300.0 * std::sqrt(a * std::numbers::pi);
        const double ratio = static_cast<double>(count_below(lattice, t)) / (t * t);
        CHECK(std::abs(ratio - 1.0 / a) < 0.01 / a);
    }
}

TEST_CASE("monotonicity up to 10^6 terms") {
    const std::vector<FamilySpec> families{SqrtShiftFamily{0.25}, ScaledSqrtFamily{1.5}, GaussLatticeFamily{1.0},
                                           CriticalFamily{2.0, 2.0}};
    for (const auto& family : families) {
        const auto seq = make_sequence(family);
        const auto values = seq.prefix(1000000);
        REQUIRE(values.size() == 1000000);
        CHECK(values.front() > 0.0);
        CHECK(std::is_sorted(values.begin(), values.end()));
        if (std::holds_alternative<CriticalFamily>(family)) {
            CHECK(std::adjacent_find(values.begin(), values.end(), std::greater_equal<>()) == values.end());
        }
    }
}

TEST_CASE("counting consistency at each modulus") {
    const auto lattice = make_sequence(GaussLatticeFamily{1.0});
    for (std::size_t n : {1u, 5u, 9u, 100u, 1000u, 5000u}) {
        const double lambda = lattice.lambda(n);
        std::size_t lo = n, hi = n;
        while (lo > 1 && lattice.lambda(lo - 1) == lambda) --lo;
        while (lattice.lambda(hi + 1) == lambda) ++hi;
        const double gap = std::min(lo > 1 ? lambda - lattice.lambda(lo - 1) : lambda, lattice.lambda(hi + 1) - lambda);
        const double eps = 0.25 * gap;
        CHECK(count_below(lattice, lambda + eps) - count_below(lattice, lambda - eps) == hi - lo + 1);
    }
}

TEST_CASE("gap law for the critical family") {
    // The asymptotes are reached once a·log^b n/√n is small.
    struct Case {
        double a, b;
        std::size_t from;
    };
    for (const Case c : {Case{0.1, 2.0, 10000}, Case{1.0, 1.6, 1000000}}) {
        const auto seq = make_sequence(CriticalFamily{c.a, c.b});
        for (std::size_t n = c.from; n < c.from + 2000; n += 37) {
            const double lo = seq.lambda(n);
            const double hi = seq.lambda(n + 1);
            CHECK(std::abs(hi * hi - lo * lo - 1.0) < 0.1);
            CHECK(std::abs((hi - lo) * 2.0 * std::sqrt(static_cast<double>(n)) - 1.0) < 0.1);
        }
    }
}

TEST_CASE("realization order does not matter") {
    const auto forward = make_sequence(GaussLatticeFamily{1.0});
    const auto backward = make_sequence(GaussLatticeFamily{1.0});
    const std::size_t n = 3 * RadialSequence::block_size + 17;
    const double last = backward.lambda(n);
    for (std::size_t i = 1; i <= n; ++i) REQUIRE(forward.lambda(i) == backward.lambda(i));
    CHECK(forward.lambda(n) == last);
}

TEST_CASE("concurrent readers agree with a serial pass") {
    const auto shared = make_sequence(CriticalFamily{2.0, 2.0});
    const auto serial = make_sequence(CriticalFamily{2.0, 2.0}).prefix(300000);
    std::vector<int> mismatches(4, 0);
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = 300000 - static_cast<std::size_t>(w); i >= 1; i -= 997) {
                if (shared.lambda(i) != serial[i - 1]) ++mismatches[static_cast<std::size_t>(w)];
                if (i <= 997) break;
            }
        });
    }
    for (auto& t : workers) t.join();
    CHECK(std::accumulate(mismatches.begin(), mismatches.end(), 0) == 0);
}

TEST_CASE("explicit sequences are finite") {
    const auto seq = make_sequence(ExplicitFamily{{1.0, 2.0, 2.0, 5.0}, 2});
    CHECK(seq.finite_size() == 4u);
    CHECK(seq.prefix(100).size() == 4);
    CHECK(count_below(seq, 2.0) == 3);
    CHECK(count_below(seq, 2.5) == 5);
    CHECK(seq.realize_radius(100.0) == 4);
}

TEST_CASE("counting window validation") {
    CHECK_NOTHROW(CountingWindow{1.0, 2.0, 2, Spacing::linear}.validate());
    CHECK_THROWS_AS((CountingWindow{0.5, 2.0, 10, Spacing::linear}.validate()), Error);
    CHECK_THROWS_AS((CountingWindow{3.0, 2.0, 10, Spacing::linear}.validate()), Error);
    CHECK_THROWS_AS((CountingWindow{1.0, 2.0, 1, Spacing::linear}.validate()), Error);
    const auto points = CountingWindow{1.0, 100.0, 3, Spacing::geometric}.points();
    REQUIRE(points.size() == 3);
    CHECK(points[1] == doctest::Approx(10.0));
}

TEST_CASE("density classification") {
    const auto classical = WeightProfile::classical(1.0);
    const CountingWindow window{20.0, 500.0, 200, Spacing::geometric};
    auto classify = [&](FamilySpec spec) { return classify_density(make_sequence(spec), classical, window); };

    const auto sub = classify(ScaledSqrtFamily{2.0});
    CHECK(sub.label == DensityLabel::subcritical);
    CHECK(sub.A_estimate == doctest::Approx(0.25).epsilon(0.01));
    CHECK(classify(ScaledSqrtFamily{1.1}).label == DensityLabel::subcritical);
    CHECK(classify(ScaledSqrtFamily{0.9}).label == DensityLabel::supercritical);
    CHECK(classify(ScaledSqrtFamily{0.5}).label == DensityLabel::supercritical);
    CHECK(classify(SqrtShiftFamily{0.5}).label == DensityLabel::critical);

    const auto lattice = classify(GaussLatticeFamily{2.0});
    CHECK(lattice.label == DensityLabel::subcritical);
    CHECK(lattice.A_estimate == doctest::Approx(0.5).epsilon(0.01));
    CHECK(classify(GaussLatticeFamily{1.0}).label == DensityLabel::critical);

    const auto critical = classify(CriticalFamily{2.0, 2.0});
    CHECK(critical.label == DensityLabel::critical);
    CHECK(critical.A_estimate == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("density classification against other weights") {
    // n(t) = t²/a² against φ = t^ρ gives A = lim t²/(a²ρ t^ρ).
    const CountingWindow window{20.0, 500.0, 200, Spacing::geometric};
    const auto result = classify_density(make_sequence(ScaledSqrtFamily{1.0}), WeightProfile::power(2.0), window);
    CHECK(result.label == DensityLabel::subcritical);
    CHECK(result.A_estimate == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("short windows give undetermined rather than throwing") {
    const auto result = classify_density(make_sequence(ExplicitFamily{{1.0, 2.0, 3.0}, 0}), WeightProfile::classical(),
                                         CountingWindow{1.0, 2.5, 2, Spacing::linear});
    CHECK(result.label == DensityLabel::undetermined);
    CHECK_FALSE(result.diagnostic.empty());
}

TEST_CASE("deficit fit recovers a") {
    const CountingWindow window{50.0, 500.0, 200, Spacing::geometric};
    for (double a : {1.0, 2.0}) {
        const auto fit = critical_deficit_fit(make_sequence(CriticalFamily{a, 2.0}), 2.0, window);
        CHECK(std::abs(fit.a_estimate - a) < 0.15 * a);
    }
    const auto slow = critical_deficit_fit(make_sequence(CriticalFamily{1.0, 1.6}), 1.6,
                                           CountingWindow{100.0, 1000.0, 200, Spacing::geometric});
    CHECK(std::abs(slow.a_estimate - 1.0) < 0.2);
}

TEST_CASE("deficit fit on a bounded deficit") {
    std::vector<double> values;
    for (int n = 1; n <= 300000; ++n) values.push_back(std::sqrt(static_cast<double>(n)));
    const auto fit = critical_deficit_fit(make_sequence(ExplicitFamily{values, 0}), 2.0,
                                          CountingWindow{50.0, 500.0, 100, Spacing::geometric});
    CHECK(std::abs(fit.a_estimate) < 1e-3);
}

TEST_CASE("deficit fit rejects nonpositive deficits") {
    // a = 0.5 < 1: λ_n = 0.5√n gives n(t) ≈ 4t² > t².
    std::vector<double> values;
    for (int n = 1; n <= 2000; ++n) values.push_back(0.5 * std::sqrt(static_cast<double>(n)));
    try {
        critical_deficit_fit(make_sequence(ExplicitFamily{values, 0}), 2.0, CountingWindow{2.0, 20.0, 20, Spacing::linear});
        FAIL("fit accepted a negative deficit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::fit);
    }
}

TEST_CASE("weight profiles") {
    const auto w = WeightProfile::log_perturbed(2.0, 1.5);
    for (double r : {std::exp(2.0), 20.0, 100.0, 1e4}) {
        const double ratio = r * w.dphi(r) / w.phi(r);
        CHECK(std::abs(ratio - 2.0) <= 2.0 * 1.5 / std::log(r) + 1e-12);
        CHECK(w.proximate_order(r) == doctest::Approx(std::log(w.phi(r)) / std::log(r)));
        const double log_r = std::log(r);
        CHECK(r * w.proximate_order_derivative(r) * log_r == doctest::Approx(1.5 * (1.0 - std::log(log_r)) / log_r));
    }
    CHECK(std::abs(1e8 * w.proximate_order_derivative(1e8) * std::log(1e8)) < 0.3);
    CHECK(w.rho_limit() == 2.0);
    CHECK(WeightProfile::classical(3.0).t_dphi(2.0) == doctest::Approx(12.0));
    CHECK(WeightProfile::power(1.5).has_integer_order() == false);
    CHECK(WeightProfile::classical().has_integer_order());
    CHECK_THROWS_AS(w.phi(1.0), Error);
    CHECK_THROWS_AS(WeightProfile::classical(0.0), Error);
    for (const auto& weight : {WeightProfile::classical(0.5), WeightProfile::power(0.7), w}) {
        double previous = weight.phi(1.5);
        for (double t = 2.0; t < 1e3; t *= 1.3) {
            CHECK(weight.phi(t) > previous);
            previous = weight.phi(t);
        }
    }
}
