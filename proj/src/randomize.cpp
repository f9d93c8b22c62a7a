#include "fockzero/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "fockzero/counter_rng.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

PointConfiguration::PointConfiguration(RadialSequence sequence, std::uint64_t seed, AngleMode mode)
    : sequence_(std::move(sequence)), seed_(seed), mode_(mode) {}

PointConfiguration::PointConfiguration(const PointConfiguration& other)
    : sequence_(other.sequence_), seed_(other.seed_), mode_(other.mode_), realized_(other.realized_count()) {}

PointConfiguration& PointConfiguration::operator=(const PointConfiguration& other) {
    sequence_ = other.sequence_;
    seed_ = other.seed_;
    mode_ = other.mode_;
    realized_.store(other.realized_count());
    return *this;
}

double PointConfiguration::theta(std::size_t n) const noexcept {
    if (mode_ == AngleMode::degenerate) return 0.0;
    double angle = two_pi * counter_uniform(seed_, n);
    // 2π·u can round up to 2π for u within an ulp of 1
    if (angle >= two_pi) angle -= two_pi;
    return angle;
}

std::size_t PointConfiguration::realize(std::size_t count) const {
    if (const auto limit = sequence_.finite_size()) count = std::min(count, *limit);
    sequence_.realize(count);
    std::size_t current = realized_.load();
    while (current < count && !realized_.compare_exchange_weak(current, count)) {
    }
    return realized_count();
}

std::size_t PointConfiguration::realize_radius(double r) const {
    const std::size_t inside = sequence_.realize_radius(r);
    realize(inside);
    return inside;
}

PointConfiguration randomize(const RadialSequence& sequence, std::uint64_t seed, AngleMode mode) {
    return PointConfiguration(sequence, seed, mode);
}

std::size_t sector_count(const PointConfiguration& cfg, const SectorQuery& query) {
    require(query.r > 0.0, ErrorKind::domain, "sector radius must be positive");
    const double width = query.beta - query.alpha;
    require(width > 0.0 && width <= two_pi, ErrorKind::domain, "sector needs alpha < beta <= alpha + 2pi");

    const std::size_t inside = cfg.realize_radius(query.r);
    std::size_t count = 0;
    for (std::size_t n = 1; n <= inside; ++n) {
        // offset in (0, 2π]; membership of (α, β] is then offset ≤ β − α
        double offset = std::fmod(cfg.theta(n) - query.alpha, two_pi);
        if (offset <= 0.0) offset += two_pi;
        if (offset <= width) ++count;
    }
    return count;
}

double chi_square_survival(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

EquidistributionStat equidistribution_stat(const PointConfiguration& cfg, double r, std::size_t bins) {
    require(bins >= 2, ErrorKind::domain, "equidistribution needs at least 2 bins");
    require(r > 0.0, ErrorKind::domain, "radius must be positive");
    const std::size_t inside = cfg.realize_radius(r);
    require(inside >= 10 * bins, ErrorKind::validation,
            "equidistribution needs n(r) >= 10 * bins points; got " + std::to_string(inside));

    std::vector<double> fractions(inside);
    std::vector<std::size_t> observed(bins, 0);
    for (std::size_t n = 1; n <= inside; ++n) {
        const double u = cfg.theta(n) / two_pi;
        fractions[n - 1] = u;
        observed[std::min(bins - 1, static_cast<std::size_t>(u * static_cast<double>(bins)))]++;
    }

    EquidistributionStat out;
    out.count = inside;
    const double expected = static_cast<double>(inside) / static_cast<double>(bins);
    for (const std::size_t o : observed) {
        const double diff = static_cast<double>(o) - expected;
        out.chi_square += diff * diff / expected;
    }
    out.p_value = chi_square_survival(out.chi_square, static_cast<double>(bins - 1));

    std::sort(fractions.begin(), fractions.end());
    const double total = static_cast<double>(inside);
    for (std::size_t i = 0; i < inside; ++i) {
        const double below = static_cast<double>(i) / total;
        const double upto = static_cast<double>(i + 1) / total;
        out.max_rel_dev = std::max({out.max_rel_dev, std::fabs(fractions[i] - below), std::fabs(upto - fractions[i])});
    }
    return out;
}

}  // namespace fockzero
