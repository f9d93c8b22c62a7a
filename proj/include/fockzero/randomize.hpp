#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <memory>

#include "fockzero/sequences.hpp"

namespace fockzero {

enum class AngleMode {
    uniform,     ///< θ_n i.i.d. uniform on [0, 2π) from a counter-based stream keyed by the seed
    degenerate,  ///< θ_n = 0 for every n (deterministic oracle mode)
};

/// A realized random set {λ_n e^{iθ_n}}. θ_n is a pure function of (seed, n), so
/// extending the realized prefix never changes earlier points and the result does not
/// depend on thread count or access order.
class PointConfiguration {
public:
    PointConfiguration(RadialSequence sequence, std::uint64_t seed, AngleMode mode = AngleMode::uniform);
    PointConfiguration(const PointConfiguration& other);
    PointConfiguration& operator=(const PointConfiguration& other);

    [[nodiscard]] const RadialSequence& sequence() const noexcept { return sequence_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] AngleMode angle_mode() const noexcept { return mode_; }
    [[nodiscard]] std::size_t origin_multiplicity() const noexcept { return sequence_.origin_multiplicity(); }

    /// θ_n ∈ [0, 2π) for n ≥ 1.
    [[nodiscard]] double theta(std::size_t n) const noexcept;
    [[nodiscard]] double lambda(std::size_t n) const { return sequence_.lambda(n); }
    [[nodiscard]] std::complex<double> point(std::size_t n) const { return std::polar(lambda(n), theta(n)); }

    /// Number of points realized so far (the largest prefix requested).
    [[nodiscard]] std::size_t realized_count() const noexcept { return realized_.load(std::memory_order_acquire); }
    /// Realizes points 1..count (clamped for finite sequences); returns the realized count.
    std::size_t realize(std::size_t count) const;
    /// Realizes every point with modulus < r; returns #{n : λ_n < r}.
    std::size_t realize_radius(double r) const;

private:
    RadialSequence sequence_;
    std::uint64_t seed_;
    AngleMode mode_;
    mutable std::atomic<std::size_t> realized_{0};
};

PointConfiguration randomize(const RadialSequence& sequence, std::uint64_t seed,
                             AngleMode mode = AngleMode::uniform);

/// Sector S(r, α, β): points with λ_n < r and θ_n in (α, β] taken mod 2π. Requires
/// α < β ≤ α + 2π.
struct SectorQuery {
    double r = 1.0;
    double alpha = 0.0;
    double beta = 6.283185307179586;
};

/// n(r, α, β). The origin is never counted.
std::size_t sector_count(const PointConfiguration& cfg, const SectorQuery& query);

struct EquidistributionStat {
    double chi_square = 0.0;
    /// sup_x |n(r, 0, 2πx)/n(r) − x|, the Kolmogorov–Smirnov distance to uniform.
    double max_rel_dev = 0.0;
    double p_value = 0.0;
    std::size_t count = 0;
};

/// Chi-square of `bins` equal angular sectors against uniform, plus the KS distance.
/// Requires bins ≥ 2 and n(r) ≥ 10·bins.
EquidistributionStat equidistribution_stat(const PointConfiguration& cfg, double r, std::size_t bins);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_survival(double statistic, double dof);

}  // namespace fockzero
