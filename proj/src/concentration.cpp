#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "fockzero/compensated.hpp"
#include "fockzero/diagnostics.hpp"
#include "fockzero/error.hpp"
#include "fockzero/parallel.hpp"
#include "fockzero/serialization.hpp"

namespace fockzero {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double golden = 0.6180339887498949;

double value_at(const ProductEvaluator& evaluator, double R, double theta) {
    const ProductValue v = evaluator.at(std::polar(R, theta));
    return v.is_exact_zero ? -std::numeric_limits<double>::infinity() : v.log_modulus;
}

std::string format(const char* pattern, double x, double y = 0.0, double z = 0.0) {
    char buffer[256];
    std::snprintf(buffer, sizeof buffer, pattern, x, y, z);
    return buffer;
}

}  // namespace

std::size_t default_grid_size(std::size_t k, std::size_t cap) {
    const std::size_t floor = std::size_t{1} << 10;
    const double cube = std::pow(static_cast<double>(k), 3.0);
    const std::size_t capped = cube >= static_cast<double>(cap) ? cap : static_cast<std::size_t>(cube);
    return std::max(floor, capped);
}

CircleSup circle_sup_log(const ProductEvaluator& evaluator, double R, std::size_t N, std::size_t refine_iters) {
    require(R > 0.0, ErrorKind::domain, "circle radius must be positive");
    require(N >= 3, ErrorKind::domain, "circle grid needs at least 3 points");
    require(R <= evaluator.radius(), ErrorKind::domain, "circle lies outside the evaluator disc");

    CircleSup out;
    const double h = two_pi / static_cast<double>(N);
    std::vector<double> values(N);
    for (std::size_t i = 0; i < N; ++i) {
        values[i] = value_at(evaluator, R, h * static_cast<double>(i));
        if (std::isinf(values[i])) {
            ++out.excluded;
            out.diagnostics.push_back(format("grid angle %.17g lands on a zero; excluded", h * static_cast<double>(i)));
        }
    }

    // Refine around the best few local maxima of the grid.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < N; ++i) {
        const double v = values[i];
        if (std::isinf(v)) continue;
        if (v >= values[(i + N - 1) % N] && v >= values[(i + 1) % N]) peaks.push_back(i);
    }
    require(!peaks.empty() || out.excluded < N, ErrorKind::numerical, "every grid point lands on a zero");
    if (peaks.empty()) {
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isinf(values[i])) peaks.push_back(i);
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    if (peaks.size() > 4) peaks.resize(4);

    out.grid_sup = values[peaks.front()];
    out.sup_estimate = out.grid_sup;
    out.argmax_theta = h * static_cast<double>(peaks.front());
    for (std::size_t peak : peaks) {
        double lo = h * static_cast<double>(peak) - h;
        double hi = h * static_cast<double>(peak) + h;
        double x1 = hi - golden * (hi - lo);
        double x2 = lo + golden * (hi - lo);
        double f1 = value_at(evaluator, R, x1);
        double f2 = value_at(evaluator, R, x2);
        for (std::size_t it = 0; it < refine_iters; ++it) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = value_at(evaluator, R, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = value_at(evaluator, R, x2);
            }
        }
        const double best = std::max(f1, f2);
        if (best > out.sup_estimate) {
            out.sup_estimate = best;
            double theta = f1 >= f2 ? x1 : x2;
            theta = std::fmod(theta, two_pi);
            if (theta < 0.0) theta += two_pi;
            out.argmax_theta = theta;
        }
    }
    return out;
}

CircleSup circle_sup_log(const PointConfiguration& cfg, const GenusSpec& genus, double R, std::size_t N,
                         std::size_t refine_iters, const EvaluatorOptions& options) {
    const ProductEvaluator evaluator(cfg, genus, R, options);
    return circle_sup_log(evaluator, R, N, refine_iters);
}

double concentration_threshold(ThresholdRule rule, double R, double a, double b) {
    if (rule == ThresholdRule::upper_envelope) return 0.5 * R * R + R;
    return 0.5 * R * R - a / 8.0 * R * std::pow(std::log(R), b);
}

std::vector<double> one_point_widths(const RadialSequence& seq, std::size_t k) {
    const double R = safe_radius(seq, k);
    const double eps = exclusion_width(seq, k);
    std::vector<double> widths;
    widths.reserve(k);
    for (std::size_t s = 1; s <= k; ++s) widths.push_back(2.0 * (std::log(1.0 / eps) + R / seq.lambda(s)));
    return widths;
}

double centered_one_point_sum(const PointConfiguration& cfg, std::size_t k, double beta) {
    const double R = safe_radius(cfg.sequence(), k);
    const complex z = std::polar(R, beta);
    CompensatedSum sum;
    for (std::size_t s = 1; s <= k; ++s) {
        sum += log_abs_elementary_factor(z / cfg.point(s), 1);
        sum += -std::log(R / cfg.lambda(s));
    }
    return sum.value();
}

ExperimentReport concentration_experiment(const RadialSequence& seq, const GenusSpec& genus,
                                          const ConcentrationOptions& options) {
    require(options.trials >= 1, ErrorKind::domain, "at least one trial is required");
    require(!options.radii.empty(), ErrorKind::domain, "at least one radius is required");
    require(options.a > 0.0, ErrorKind::domain, "a must be positive");
    if (const auto* critical = std::get_if<CriticalFamily>(&seq.family())) {
        require(critical->a == options.a && critical->b == options.b, ErrorKind::domain,
                "threshold parameters (a, b) do not match the critical family");
    }

    ExperimentReport report;
    report.seed = options.seed;
    if (!std::holds_alternative<CriticalFamily>(seq.family())) {
        report.warnings.push_back("sequence is not the critical family; thresholds use the supplied (a, b)");
    }

    struct Target {
        SafeRadius safe;
        std::size_t grid;
        double expected;
        double threshold;
    };
    std::vector<Target> targets;
    for (double requested : options.radii) {
        const SafeRadius safe = nearest_safe_radius(seq, requested);
        if (std::abs(safe.radius - requested) > 1e-12 * requested) {
            report.warnings.push_back(format("radius %.17g is not a safe radius; nudged to R_k = %.17g (k = %.0f)",
                                             requested, safe.radius, static_cast<double>(safe.k)));
        }
        const std::size_t grid = options.grid_points.value_or(default_grid_size(safe.k));
        targets.push_back(Target{safe, grid, expected_log_product(seq, safe.radius),
                                 concentration_threshold(options.threshold, safe.radius, options.a, options.b)});
    }

    json fingerprint_input;
    fingerprint_input["family"] = to_json(seq.family());
    fingerprint_input["genus"] = to_json(genus);
    fingerprint_input["options"] = to_json(options);
    report.fingerprint = fingerprint(fingerprint_input.dump());

    const std::size_t far_terms = options.evaluator.far_terms;
    seq.realize(far_terms);
    const std::size_t radii = targets.size();
    report.trials.resize(options.trials * radii);
    report.seeds.resize(options.trials);

    parallel_for(
        options.trials,
        [&](std::size_t trial) {
            const std::uint64_t seed = options.seed ^ static_cast<std::uint64_t>(trial);
            report.seeds[trial] = seed;
            const PointConfiguration cfg(seq, seed);
            GenusSpec local = genus;
            if (local.correction) {
                std::size_t K = far_terms;
                if (const auto size = seq.finite_size()) K = std::min(K, *size);
                local = with_power_sum(local, tail_sum(cfg, local.correction->rho, K));
            }
            for (std::size_t r = 0; r < radii; ++r) {
                const Target& target = targets[r];
                const double R = target.safe.radius;
                const ProductEvaluator evaluator(cfg, local, R, options.evaluator);
                const CircleSup sup = circle_sup_log(evaluator, R, target.grid, options.refine_iters);
                TrialRecord& record = report.trials[trial * radii + r];
                record.trial = trial;
                record.seed = seed;
                record.k = target.safe.k;
                record.radius = R;
                record.sup = sup.sup_estimate;
                record.threshold = target.threshold;
                record.violated = sup.sup_estimate >= target.threshold;
                record.deviation = value_at(evaluator, R, options.beta) - target.expected;
                record.tail_bound = evaluator.tail_bound();
            }
        },
        options.threads);

    const double trials = static_cast<double>(options.trials);
    for (std::size_t r = 0; r < radii; ++r) {
        const Target& target = targets[r];
        RadiusAggregate aggregate;
        aggregate.k = target.safe.k;
        aggregate.radius = target.safe.radius;
        aggregate.epsilon = target.safe.epsilon;
        aggregate.expected = target.expected;
        aggregate.threshold = target.threshold;
        aggregate.grid_points = target.grid;
        CompensatedSum sup_sum, dev_sum;
        std::size_t violations = 0;
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
            const TrialRecord& record = report.trials[trial * radii + r];
            violations += record.violated ? 1 : 0;
            sup_sum += record.sup;
            dev_sum += record.deviation;
        }
        aggregate.violation_fraction = static_cast<double>(violations) / trials;
        aggregate.mean_sup = sup_sum.value() / trials;
        aggregate.mean_deviation = dev_sum.value() / trials;
        CompensatedSum square_sum;
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
            const double d = report.trials[trial * radii + r].deviation - aggregate.mean_deviation;
            square_sum += d * d;
        }
        aggregate.sd_deviation = options.trials > 1 ? std::sqrt(square_sum.value() / (trials - 1.0)) : 0.0;

        const double R = target.safe.radius;
        const double t = options.a / 16.0 * R * std::pow(std::log(R), options.b);
        const double single = t > 0.0 ? hoeffding_bound(one_point_widths(seq, target.safe.k), t) : 1.0;
        aggregate.predicted_bound = std::min(1.0, static_cast<double>(target.grid) * single);
        report.aggregates.push_back(aggregate);
    }

    report.notes.push_back("grid size N_k = max(2^10, min(k^3, 2^11)) is a desk-scale engineering choice");
    report.notes.push_back(
        "predicted_bound is the one-sided Hoeffding bound at t = (a/16) R log^b R with widths 2c_s, "
        "union-bounded over the N_k grid points; unquantified constants are set to 1");
    report.notes.push_back("per-trial seed is seed XOR trial index; tail_bound fields are estimates, not proofs");
    return report;
}

}  // namespace fockzero
