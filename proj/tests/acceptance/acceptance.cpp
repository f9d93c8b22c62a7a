// One PASS/FAIL line per acceptance criterion; exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "fockzero/canonical_product.hpp"
#include "fockzero/diagnostics.hpp"
#include "fockzero/randomize.hpp"
#include "fockzero/sequences.hpp"

using namespace fockzero;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, format, args...);
    return buffer;
}

// Sample mean of log|W(Re^{iβ})| over 10^4 configurations against E log|W|.
Outcome expectation_law() {
    const auto seq = make_sequence(ScaledSqrtFamily{1.5});
    const double R = 10.0;
    const complex z = std::polar(R, 0.7);
    const std::size_t trials = 10000;
    std::vector<double> values(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        values[t] = log_product(randomize(seq, t), z, GenusSpec{1, std::nullopt}, {FixedTerms{1u << 14}}).log_modulus;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(trials);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / static_cast<double>(trials - 1) / static_cast<double>(trials));
    const double expected = expected_log_product(seq, R);
    return {std::abs(mean - expected) <= 4.0 * se,
            fmt("mean %.6f expected %.6f SE %.6f (%.2f SE)", mean, expected, se, std::abs(mean - expected) / se)};
}

Outcome genus_identity() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> radius(0.5, 30.0), angle(0.0, 2.0 * pi), scale(0.7, 2.5);
    const std::size_t K = 10000;
    double worst = 0.0;
    for (std::uint64_t c = 0; c < 100; ++c) {
        const auto cfg = randomize(make_sequence(ScaledSqrtFamily{scale(rng)}), 1000 + c);
        const auto corrected = with_power_sum(genus_for(WeightProfile::classical()), tail_sum(cfg, 2, K));
        for (int i = 0; i < 10; ++i) {
            const complex z = std::polar(radius(rng), angle(rng));
            const double one = log_product(cfg, z, GenusSpec{1, std::nullopt}, {FixedTerms{K}}).log_modulus;
            const double two = log_product(cfg, z, corrected, {FixedTerms{K}}).log_modulus;
            worst = std::max(worst, std::abs(one - two) / std::max(1.0, std::abs(one)));
        }
    }
    return {worst <= 1e-10, fmt("max relative difference %.3e over 1000 points", worst)};
}

Outcome branch_agreement() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> modulus(0.3, 0.5), angle(0.0, 2.0 * pi);
    std::uniform_int_distribution<int> genus(0, 4);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const complex w = std::polar(modulus(rng), angle(rng));
        const int d = genus(rng);
        worst = std::max(worst, std::abs(log_elementary_factor_series(w, d) - log_elementary_factor_direct(w, d)));
    }
    return {worst <= 1e-12, fmt("max difference %.3e", worst)};
}

Outcome classification() {
    const CountingWindow window{20.0, 500.0, 200, Spacing::geometric};
    const auto classical = WeightProfile::classical(1.0);
    struct Case {
        FamilySpec family;
        DensityLabel expected;
        const char* name;
    };
    const std::vector<Case> cases{{ScaledSqrtFamily{0.5}, DensityLabel::supercritical, "a=0.5"},
                                  {ScaledSqrtFamily{0.9}, DensityLabel::supercritical, "a=0.9"},
                                  {ScaledSqrtFamily{1.1}, DensityLabel::subcritical, "a=1.1"},
                                  {ScaledSqrtFamily{2.0}, DensityLabel::subcritical, "a=2"},
                                  {CriticalFamily{2.0, 2.0}, DensityLabel::critical, "critical(2,2)"}};
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto result = classify_density(make_sequence(c.family), classical, window);
        pass = pass && result.label == c.expected;
        detail += fmt("%s: %s (A=%.4f) ", c.name, to_string(result.label), result.A_estimate);
    }
    return {pass, detail};
}

Outcome deficit_fit() {
    const CountingWindow window{50.0, 500.0, 200, Spacing::geometric};
    bool pass = true;
    std::string detail;
    for (double a : {1.0, 2.0}) {
        const auto fit = critical_deficit_fit(make_sequence(CriticalFamily{a, 2.0}), 2.0, window);
        pass = pass && std::abs(fit.a_estimate - a) <= 0.15 * a;
        detail += fmt("a=%g fitted %.5f ", a, fit.a_estimate);
    }
    return {pass, detail};
}

Outcome uniqueness_exponent() {
    bool pass = true;
    std::string detail;
    for (double alpha : {0.0, 0.25, 0.5}) {
        const double c = uniqueness_exponent_fit(make_sequence(SqrtShiftFamily{alpha}), RadiusGrid{10.0, 200.0, 64});
        const double target = 2.0 * alpha + 1.0;
        pass = pass && std::abs(c - target) <= 0.05 * target;
        detail += fmt("alpha=%g c=%.5f ", alpha, c);
    }
    return {pass, detail};
}

Outcome gauss_circle() {
    const double t = 1000.0 * std::sqrt(pi);
    const double ratio = static_cast<double>(count_below(make_sequence(GaussLatticeFamily{1.0}), t)) / (t * t);
    return {std::abs(ratio - 1.0) <= 0.01, fmt("n(t)/t^2 = %.6f", ratio)};
}

Outcome equidistribution() {
    const auto seq = make_sequence(ScaledSqrtFamily{1.0});
    // λ_n = √n, so exactly 10^5 moduli lie below √(10^5 + 1/2).
    const double r = std::sqrt(100000.5);
    int good = 0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto stat = equidistribution_stat(randomize(seq, seed), r, 16);
        count = stat.count;
        good += stat.p_value > 0.01 ? 1 : 0;
    }
    return {good >= 95 && count == 100000, fmt("%d of 100 seeds with p > 0.01 (n(r) = %zu)", good, count)};
}

Outcome indicators() {
    double worst = 0.0;
    std::string detail;
    for (double a : {0.5, 1.0, 2.0}) {
        for (double rho : {0.5, 1.5, 2.0}) {
            for (double theta : {0.0, 1.0, 4.0}) {
                const double value = lp_indicator(UniformMeasure{a}, rho, theta);
                worst = std::max(worst, std::abs(value - a / rho));
            }
        }
    }
    return {worst <= 1e-6, fmt("max |h - a/rho| = %.3e", worst)};
}

Outcome concentration_direction() {
    ConcentrationOptions options;
    options.radii = {20.0, 40.0, 60.0};
    options.trials = 300;
    options.seed = 20241015;
    const auto report = concentration_experiment(make_sequence(CriticalFamily{2.0, 2.0}), GenusSpec{1, std::nullopt}, options);
    bool monotone = true;
    std::string detail;
    for (std::size_t i = 0; i < report.aggregates.size(); ++i) {
        const auto& agg = report.aggregates[i];
        if (i > 0 && agg.violation_fraction > report.aggregates[i - 1].violation_fraction) monotone = false;
        detail += fmt("R=%.3f: %.4f ", agg.radius, agg.violation_fraction);
    }
    return {monotone && report.aggregates.size() == 3, detail};
}

Outcome norm_quadrature() {
    const auto empty = randomize(make_sequence(ExplicitFamily{}), 0);
    const auto estimate = fock_norm_estimate(empty, GenusSpec{2, std::nullopt}, WeightProfile::classical(1.0), 2.0, 8.0,
                                             1024, 256);
    const double relative = std::abs(std::exp(estimate.log_norm_p) / pi - 1.0);
    return {relative <= 1e-6, fmt("norm %.12f, relative error %.3e", std::exp(estimate.log_norm_p), relative)};
}

std::string run_cli(const std::vector<std::string>& args, const char* threads) {
    ::setenv("FOCKZERO_THREADS", threads, 1);
    std::vector<const char*> argv{"fockzero"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::to_string(code) + "\n" + out.str();
}

Outcome determinism() {
    const std::vector<std::vector<std::string>> runs{
        {"experiment", "concentration", "--family", "critical", "--a", "2", "--b", "2", "--trials", "24", "--radii",
         "20,40", "--seed", "9"},
        {"experiment", "norm", "--family", "scaled-sqrt", "--a", "2", "--p", "2", "--seed", "5"},
        {"eval-circle", "--family", "scaled-sqrt", "--a", "1.5", "--radius", "7", "--points", "64", "--seed", "3"},
    };
    bool pass = true;
    std::string detail;
    for (const auto& args : runs) {
        const std::string one = run_cli(args, "1");
        const std::string four = run_cli(args, "4");
        const std::string again = run_cli(args, "1");
        const bool same = one == four && one == again && one.rfind("0\n", 0) == 0;
        pass = pass && same;
        detail += args[0] + (args[0] == "experiment" ? " " + args[1] : "") + (same ? " identical; " : " DIFFERS; ");
    }
    ::unsetenv("FOCKZERO_THREADS");
    return {pass, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"expectation law", expectation_law},
        {"genus identity", genus_identity},
        {"elementary factor branch agreement", branch_agreement},
        {"density classification", classification},
        {"critical deficit fit", deficit_fit},
        {"uniqueness exponent", uniqueness_exponent},
        {"Gauss circle count", gauss_circle},
        {"angular equidistribution", equidistribution},
        {"indicator closed forms", indicators},
        {"concentration direction", concentration_direction},
        {"norm quadrature", norm_quadrature},
        {"thread-count determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += outcome.pass ? 0 : 1;
        std::printf("criterion %2zu %s: %s [%.1f s] %s\n", i + 1, criteria[i].first, outcome.pass ? "PASS" : "FAIL",
                    seconds, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
