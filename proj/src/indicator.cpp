#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "fockzero/compensated.hpp"
#include "fockzero/diagnostics.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double quadrature_tolerance = 1e-8;
// Periodic kernels vanish on coarse dyadic nodes; refine at least this far before accepting.
constexpr int minimum_levels = 6;

double simpson(const std::function<double(double)>& f, double a, double fa, double m, double fm, double b, double fb,
               double whole, double tolerance, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    const bool settled = depth <= 50 - minimum_levels && std::abs(delta) <= 15.0 * tolerance;
    if (depth <= 0 || settled) return left + right + delta / 15.0;
    return simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tolerance, depth - 1) +
           simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tolerance, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tolerance) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, fa, m, fm, b, fb, whole, tolerance, 50);
}

bool is_integer_order(double rho) { return rho >= 1.0 && std::abs(rho - std::round(rho)) < 1e-12; }

// ∫_{θ−2π}^{θ} kernel(ψ) dΔ(ψ), split where the density jumps.
double integrate_measure(const AngularDensityMeasure& measure, double theta,
                         const std::function<double(double)>& kernel) {
    const double lo = theta - two_pi;
    if (const auto* uniform = std::get_if<UniformMeasure>(&measure)) {
        if (uniform->mass == 0.0) return 0.0;
        const double density = uniform->mass / two_pi;
        return density * integrate(kernel, lo, theta, quadrature_tolerance / std::max(1.0, density));
    }
    const auto& piecewise = std::get<PiecewiseMeasure>(measure);
    CompensatedSum total;
    for (std::size_t i = 0; i + 1 < piecewise.breakpoints.size(); ++i) {
        const double mass = piecewise.masses[i];
        if (mass == 0.0) continue;
        const double width = piecewise.breakpoints[i + 1] - piecewise.breakpoints[i];
        const double density = mass / width;
        // Copies of the arc shifted by multiples of 2π that meet (lo, θ).
        for (int shift = -2; shift <= 2; ++shift) {
            const double a = std::max(lo, piecewise.breakpoints[i] + two_pi * shift);
            const double b = std::min(theta, piecewise.breakpoints[i + 1] + two_pi * shift);
            if (b > a) total += density * integrate(kernel, a, b, quadrature_tolerance / std::max(1.0, density));
        }
    }
    return total.value();
}

}  // namespace

double hoeffding_bound(const std::vector<double>& widths, double t) {
    require(!widths.empty(), ErrorKind::domain, "hoeffding_bound needs at least one width");
    require(t > 0.0, ErrorKind::domain, "hoeffding_bound needs t > 0");
    CompensatedSum squares;
    for (double w : widths) {
        require(w > 0.0 && std::isfinite(w), ErrorKind::domain, "widths must be positive and finite");
        squares += w * w;
    }
    return std::exp(-2.0 * t * t / squares.value());
}

void validate_measure(const AngularDensityMeasure& measure) {
    if (const auto* uniform = std::get_if<UniformMeasure>(&measure)) {
        require(uniform->mass >= 0.0 && std::isfinite(uniform->mass), ErrorKind::validation,
                "measure mass must be finite and nonnegative");
        return;
    }
    const auto& piecewise = std::get<PiecewiseMeasure>(measure);
    require(piecewise.breakpoints.size() == piecewise.masses.size() + 1, ErrorKind::validation,
            "piecewise measure needs one more breakpoint than masses");
    require(piecewise.breakpoints.size() >= 2, ErrorKind::validation, "piecewise measure needs at least one arc");
    require(piecewise.breakpoints.front() >= 0.0 && piecewise.breakpoints.back() <= two_pi + 1e-12,
            ErrorKind::validation, "breakpoints must lie in [0, 2pi]");
    for (std::size_t i = 0; i + 1 < piecewise.breakpoints.size(); ++i) {
        require(piecewise.breakpoints[i] < piecewise.breakpoints[i + 1], ErrorKind::validation,
                "breakpoints must be strictly increasing");
    }
    for (double m : piecewise.masses) {
        require(m >= 0.0 && std::isfinite(m), ErrorKind::validation, "masses must be finite and nonnegative");
    }
}

double lp_indicator(const AngularDensityMeasure& measure, double rho, double theta, std::optional<complex> delta,
                    IndicatorBranch branch) {
    validate_measure(measure);
    require(rho > 0.0 && std::isfinite(rho), ErrorKind::domain, "rho must be positive");
    const bool integer = is_integer_order(rho);
    if (branch == IndicatorBranch::automatic) branch = integer ? IndicatorBranch::lp2 : IndicatorBranch::lp1;
    require(!(branch == IndicatorBranch::lp1 && integer), ErrorKind::domain,
            "branch error: the non-integer indicator formula was requested for an integer order");
    require(!(branch == IndicatorBranch::lp2 && !integer), ErrorKind::domain,
            "branch error: the integer indicator formula was requested for a non-integer order");

    if (branch == IndicatorBranch::lp1) {
        const double integral = integrate_measure(
            measure, theta, [&](double psi) { return std::cos(rho * (theta - psi - std::numbers::pi)); });
        return std::numbers::pi / std::sin(std::numbers::pi * rho) * integral;
    }
    const double integral =
        integrate_measure(measure, theta, [&](double psi) { return (psi - theta) * std::sin(rho * (psi - theta)); });
    double value = -integral;
    if (delta && std::abs(*delta) > 0.0) value += std::abs(*delta) / rho * std::cos(rho * (theta - std::arg(*delta)));
    return value;
}

IndicatorComparison compare_indicator(const PointConfiguration& cfg, const GenusSpec& genus,
                                      const WeightProfile& weight, double theta, double indicator,
                                      const RadiusGrid& grid, const TruncationPolicy& policy) {
    require(grid.r_min > 0.0 && grid.r_max > grid.r_min && grid.count >= 2, ErrorKind::domain,
            "radius grid must be increasing and positive");
    IndicatorComparison out;
    const double step = std::log(grid.r_max / grid.r_min) / static_cast<double>(grid.count - 1);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double r = grid.r_min * std::exp(step * static_cast<double>(i));
        const ProductValue v = log_product(cfg, std::polar(r, theta), genus, policy);
        const double ratio = v.log_modulus / weight.phi(r);
        out.radii.push_back(r);
        out.ratio.push_back(ratio);
        out.deviation.push_back(std::abs(ratio - indicator));
    }
    std::vector<std::size_t> order(grid.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.deviation[a] > out.deviation[b]; });
    const auto worst = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(grid.count)));
    out.worst.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(worst));
    std::sort(out.worst.begin(), out.worst.end());
    CompensatedSum rest;
    std::size_t kept = 0;
    for (std::size_t j = worst; j < order.size(); ++j) {
        const double d = out.deviation[order[j]];
        out.max_deviation_rest = std::max(out.max_deviation_rest, d);
        rest += d;
        ++kept;
    }
    out.mean_deviation_rest = kept ? rest.value() / static_cast<double>(kept) : 0.0;
    return out;
}

}  // namespace fockzero
