#include <cmath>

#include "fockzero/canonical_product.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

namespace {

constexpr double series_relative_cutoff = 0x1.0p-60;
constexpr int series_max_terms = 4096;

}  // namespace

complex log_elementary_factor_direct(complex w, int genus) {
    require(genus >= 0, ErrorKind::domain, "genus must be nonnegative");
    complex sum = std::log(complex(1.0, 0.0) - w);
    complex power(1.0, 0.0);
    for (int j = 1; j <= genus; ++j) {
        power *= w;
        sum += power / static_cast<double>(j);
    }
    return sum;
}

complex log_elementary_factor_series(complex w, int genus) {
    require(genus >= 0, ErrorKind::domain, "genus must be nonnegative");
    require(std::abs(w) < 1.0, ErrorKind::domain, "tail series needs |w| < 1");
    complex power(1.0, 0.0);
    for (int j = 1; j <= genus; ++j) power *= w;
    complex sum(0.0, 0.0);
    for (int j = genus + 1; j < genus + series_max_terms; ++j) {
        power *= w;
        const complex term = power / static_cast<double>(j);
        sum -= term;
        if (std::abs(term) <= series_relative_cutoff * std::abs(sum)) break;
        if (power == complex(0.0, 0.0)) break;
    }
    return sum;
}

std::optional<complex> log_elementary_factor(complex w, int genus) {
    if (w == complex(1.0, 0.0)) return std::nullopt;
    if (std::norm(w) <= 0.25) return log_elementary_factor_series(w, genus);
    return log_elementary_factor_direct(w, genus);
}

double log_abs_elementary_factor(complex w, int genus) {
    const double r2 = std::norm(w);
    if (r2 <= 0.25) {
        // Re of −Σ_{j>d} w^j/j, stopped once |w|^j falls 2^-60 below the leading |w|^{d+1}.
        complex power(1.0, 0.0);
        for (int j = 1; j <= genus + 1; ++j) power *= w;
        const double stop = 0x1.0p-120 * std::norm(power);
        double sum = 0.0;
        double power_norm = std::norm(power);
        for (int j = genus + 1; j < genus + series_max_terms; ++j) {
            sum -= power.real() / static_cast<double>(j);
            power *= w;
            power_norm *= r2;
            if (power_norm <= stop) break;
        }
        return sum;
    }
    const complex one_minus = complex(1.0, 0.0) - w;
    double sum = 0.5 * std::log(std::norm(one_minus));
    complex power(1.0, 0.0);
    for (int j = 1; j <= genus; ++j) {
        power *= w;
        sum += power.real() / static_cast<double>(j);
    }
    return sum;
}

}  // namespace fockzero
