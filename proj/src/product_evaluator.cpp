#include <algorithm>
#include <cmath>

#include "fockzero/canonical_product.hpp"
#include "fockzero/compensated.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

namespace {

// Terms of the far series below this magnitude are dropped; the dropped remainder is
// accounted for in the tail bound.
constexpr double far_series_cutoff = 1e-18;

// Direct formula loses relative accuracy only for tiny |w|; below |w| = 1/8 the series
// needs at most ~20 terms.
inline double near_log_abs(complex w, int genus) {
    const double norm = std::norm(w);
    if (norm <= 1.0 / 64.0) {
        complex power(1.0, 0.0);
        for (int j = 1; j <= genus; ++j) power *= w;
        double sum = 0.0;
        for (int j = genus + 1; j < genus + 64; ++j) {
            power *= w;
            const double term = power.real() / j;
            sum -= term;
            if (std::norm(power) < 1e-40) break;
        }
        return sum;
    }
    double sum = 0.5 * std::log(std::norm(complex(1.0, 0.0) - w));
    complex power(1.0, 0.0);
    for (int j = 1; j <= genus; ++j) {
        power *= w;
        sum += power.real() / j;
    }
    return sum;
}

}  // namespace

ProductEvaluator::ProductEvaluator(const PointConfiguration& cfg, const GenusSpec& genus, double radius,
                                   const EvaluatorOptions& options)
    : genus_(genus.genus), origin_(cfg.origin_multiplicity()), radius_(radius), correction_(genus.correction) {
    require(radius > 0.0, ErrorKind::domain, "evaluator radius must be positive");
    require(genus.genus >= 0, ErrorKind::domain, "genus must be nonnegative");
    require(options.near_multiple > 1.0, ErrorKind::domain, "near_multiple must exceed 1");

    const std::size_t near = cfg.realize_radius(options.near_multiple * radius);
    near_points_.reserve(near);
    near_inverse_.reserve(near);
    for (std::size_t k = 1; k <= near; ++k) {
        const double lambda = cfg.lambda(k);
        const double theta = cfg.theta(k);
        near_points_.push_back(std::polar(lambda, theta));
        near_inverse_.push_back(std::polar(1.0 / lambda, -theta));
    }

    std::size_t total = std::max(near, options.far_terms);
    if (const auto limit = cfg.sequence().finite_size()) total = std::min(total, *limit);
    cfg.realize(total);
    const auto lambdas = cfg.sequence().prefix(total);

    double remainder = 0.0;
    far_power_sums_.assign(static_cast<std::size_t>(genus_) + 2, complex(0.0, 0.0));
    for (std::size_t k = near + 1; k <= total; ++k) {
        const double lambda = lambdas[k - 1];
        // Scaled by radius^j so that neither the sums nor z^j overflow for large j.
        const complex u = std::polar(radius / lambda, -cfg.theta(k));
        const double ratio = radius / lambda;
        complex power(1.0, 0.0);
        double scale = 1.0;
        for (int j = 1; j <= genus_; ++j) {
            power *= u;
            scale *= ratio;
        }
        for (std::size_t j = static_cast<std::size_t>(genus_) + 1;; ++j) {
            power *= u;
            scale *= ratio;
            if (j >= far_power_sums_.size()) far_power_sums_.resize(j + 1, complex(0.0, 0.0));
            far_power_sums_[j] += power;
            if (scale < far_series_cutoff) {
                remainder += scale * ratio / (1.0 - ratio);
                break;
            }
        }
    }
    total_terms_ = total;

    double beyond = genus_tail_bound(cfg, total, radius, genus_);
    if (correction_) {
        beyond += correction_->standard_error * options.tail.sigmas * std::pow(radius, correction_->rho) /
                  correction_->rho;
    }
    tail_bound_ = remainder + beyond;
}

ProductValue ProductEvaluator::at(complex z) const {
    const double abs_z = std::abs(z);
    require(abs_z <= radius_ * (1.0 + 1e-12), ErrorKind::domain, "point outside the evaluator disc");
    if (origin_ > 0 && abs_z == 0.0) return ProductValue::exact_zero();

    CompensatedSum sum;
    if (origin_ > 0) sum += static_cast<double>(origin_) * std::log(abs_z);
    for (const complex& inverse : near_inverse_) {
        const complex w = z * inverse;
        if (std::abs(complex(1.0, 0.0) - w) < exact_zero_tolerance) return ProductValue::exact_zero();
        sum += near_log_abs(w, genus_);
    }

    complex far(0.0, 0.0);
    const complex zeta = z / radius_;
    complex power(1.0, 0.0);
    for (std::size_t j = 1; j < far_power_sums_.size(); ++j) {
        power *= zeta;
        if (j > static_cast<std::size_t>(genus_)) far -= power * far_power_sums_[j] / static_cast<double>(j);
    }
    sum += far.real();

    if (correction_) {
        sum += (-(correction_->power_sum / static_cast<double>(correction_->rho)) * std::pow(z, correction_->rho)).real();
    }
    return ProductValue{sum.value(), tail_bound_, false, total_terms_};
}

}  // namespace fockzero
