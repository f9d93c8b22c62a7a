#include <algorithm>
#include <cmath>
#include <limits>

#include "fockzero/diagnostics.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

const char* to_string(JensenStatus status) noexcept {
    switch (status) {
        case JensenStatus::certified_on_range: return "certified_on_range";
        case JensenStatus::violated: return "violated";
        case JensenStatus::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

JensenVerdict jensen_certificate(const RadialSequence& seq, const WeightProfile& weight, double p, PowerDecay g,
                                 double M, double T_max, std::size_t grid_points) {
    require(p > 0.0, ErrorKind::domain, "p must be positive");
    require(g.gamma > 0.0, ErrorKind::domain, "power decay needs gamma > 0");
    require(M >= 1.0, ErrorKind::domain, "M must be at least 1");
    require(T_max > M, ErrorKind::domain, "T_max must exceed M");
    require(grid_points >= 1000, ErrorKind::domain, "the Jensen grid needs at least 1000 points");
    const double exponent = g.gamma * p;
    require(exponent <= 1.0, ErrorKind::hypothesis,
            "g^p is integrable at infinity (gamma*p = " + std::to_string(exponent) + " > 1)");

    JensenVerdict verdict;
    verdict.divergence_exponent = exponent;
    verdict.M = M;
    verdict.T_max = T_max;

    std::vector<double> grid;
    grid.reserve(grid_points);
    const double ratio = std::log(T_max / M) / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) grid.push_back(M * std::exp(ratio * static_cast<double>(i)));
    grid.back() = T_max;
    // n(t) only jumps right after each λ_n, so t = λ_n is where the inequality is tightest.
    const std::size_t below = seq.realize_radius(T_max);
    for (std::size_t n = 1; n <= below; ++n) {
        const double lambda = seq.lambda(n);
        if (lambda >= M) grid.push_back(lambda);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    bool tie = false;
    verdict.margin.reserve(grid.size());
    for (double t : grid) {
        const double required = weight.t_dphi(t) - g.gamma - 1.0 / p;
        const double margin = static_cast<double>(count_below(seq, t)) - required;
        verdict.margin.push_back(margin);
        const double tolerance = 1e-9 * std::max(1.0, std::abs(required));
        if (margin < -tolerance && !verdict.first_violation_t) verdict.first_violation_t = t;
        if (std::abs(margin) <= tolerance) tie = true;
    }
    verdict.grid = std::move(grid);
    if (verdict.first_violation_t) {
        verdict.status = JensenStatus::violated;
    } else {
        verdict.status = tie ? JensenStatus::inconclusive : JensenStatus::certified_on_range;
    }
    return verdict;
}

ExponentFit uniqueness_exponent_details(const RadialSequence& seq, const RadiusGrid& grid) {
    require(grid.r_min > 0.0 && grid.r_max > grid.r_min, ErrorKind::fit, "radius grid must be increasing and positive");
    require(grid.r_max / grid.r_min >= 10.0, ErrorKind::fit, "radius grid spans less than a decade");
    require(grid.count >= 3, ErrorKind::fit, "radius grid needs at least 3 radii");

    ExponentFit fit;
    const double step = std::log(grid.r_max / grid.r_min) / static_cast<double>(grid.count - 1);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double R = i + 1 == grid.count ? grid.r_max : grid.r_min * std::exp(step * static_cast<double>(i));
        const double D = 2.0 * expected_log_product(seq, R) - R * R;
        fit.radii.push_back(R);
        fit.deficit.push_back(D);
        const double x = std::log(R);
        sx += x;
        sy += D;
        sxx += x * x;
        sxy += x * D;
    }
    const double n = static_cast<double>(grid.count);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - slope * sx) / n;
    fit.c = -slope;
    double rss = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double r = fit.deficit[i] - (fit.intercept + slope * std::log(fit.radii[i]));
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / n);
    if (!std::isfinite(fit.rms_residual) || fit.rms_residual > exponent_fit_rms_limit) {
        fit.logarithmic = false;
        const double inf = std::numeric_limits<double>::infinity();
        fit.c = fit.deficit.back() < fit.deficit.front() ? inf : -inf;
    }
    return fit;
}

double uniqueness_exponent_fit(const RadialSequence& seq, const RadiusGrid& grid) {
    return uniqueness_exponent_details(seq, grid).c;
}

double safe_radius(const RadialSequence& seq, std::size_t k) {
    require(k >= 1, ErrorKind::domain, "safe radius index starts at 1");
    if (const auto size = seq.finite_size()) require(k < *size, ErrorKind::domain, "safe radius index out of range");
    return 0.5 * (seq.lambda(k) + seq.lambda(k + 1));
}

double exclusion_width(const RadialSequence& seq, std::size_t k) {
    require(k >= 1, ErrorKind::domain, "safe radius index starts at 1");
    if (const auto size = seq.finite_size()) require(k < *size, ErrorKind::domain, "safe radius index out of range");
    const double lo = seq.lambda(k);
    const double hi = seq.lambda(k + 1);
    return (hi - lo) / (4.0 * (lo + hi));
}

SafeRadius nearest_safe_radius(const RadialSequence& seq, double R) {
    require(R > 0.0, ErrorKind::domain, "radius must be positive");
    const std::size_t below = seq.realize_radius(R);
    std::size_t last = below + 64;
    if (const auto size = seq.finite_size()) {
        require(*size >= 2, ErrorKind::domain, "safe radii need at least two moduli");
        last = std::min(last, *size - 1);
    }
    const std::size_t first = below > 64 ? below - 64 : 1;
    SafeRadius best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = first; k <= last; ++k) {
        const double lo = seq.lambda(k);
        const double hi = seq.lambda(k + 1);
        if (!(lo < hi)) continue;
        const double radius = 0.5 * (lo + hi);
        const double distance = std::abs(radius - R);
        if (distance < best_distance) {
            best_distance = distance;
            best = SafeRadius{k, radius, (hi - lo) / (4.0 * (lo + hi))};
        }
    }
    require(best.k != 0, ErrorKind::numerical, "no gap between consecutive moduli near the requested radius");
    return best;
}

}  // namespace fockzero
