#include "fockzero/canonical_product.hpp"

#include <algorithm>
#include <cmath>

#include "fockzero/compensated.hpp"
#include "fockzero/error.hpp"

namespace fockzero {

GenusSpec genus_for(const WeightProfile& weight, GenusConvention convention) {
    const double rho = weight.rho_limit();
    if (convention == GenusConvention::genus_one) {
        require(rho == 2.0, ErrorKind::domain, "the genus-one convention applies to order-2 weights only");
        return GenusSpec{1, std::nullopt};
    }
    if (weight.has_integer_order()) {
        const int order = static_cast<int>(rho);
        return GenusSpec{order, Correction{order, complex(0.0, 0.0), 0.0}};
    }
    return GenusSpec{static_cast<int>(std::floor(rho)), std::nullopt};
}

TailSum tail_sum(const PointConfiguration& cfg, int rho, std::size_t K) {
    require(rho >= 1, ErrorKind::domain, "tail_sum needs a positive integer order");
    if (const auto limit = cfg.sequence().finite_size()) {
        require(K <= *limit, ErrorKind::domain, "K exceeds the finite configuration");
    }
    cfg.realize(K);
    CompensatedComplexSum sum;
    for (std::size_t k = 1; k <= K; ++k) {
        sum += std::polar(std::pow(cfg.lambda(k), -rho), -rho * cfg.theta(k));
    }
    TailOptions options;
    const std::size_t realized = cfg.realized_count();
    if (realized > K) options.explicit_terms = std::max(options.explicit_terms, realized - K);
    TailSum out;
    out.partial = sum.value();
    out.standard_error = std::sqrt(power_tail(cfg.sequence(), K, 2.0 * rho, options));
    return out;
}

GenusSpec with_power_sum(GenusSpec genus, const TailSum& tail) {
    if (genus.correction) {
        genus.correction->power_sum = tail.partial;
        genus.correction->standard_error = tail.standard_error;
    }
    return genus;
}

void TruncationPolicy::validate() const {
    require(max_terms > 0, ErrorKind::domain, "max_terms must be positive");
    if (const auto* multiple = std::get_if<RadiusMultiple>(&mode)) {
        require(multiple->m >= 2.0, ErrorKind::domain, "radius_multiple needs m >= 2");
    }
    if (const auto* target = std::get_if<ErrorTarget>(&mode)) {
        require(target->epsilon > 0.0, ErrorKind::domain, "error_target needs epsilon > 0");
    }
}

double power_tail(const RadialSequence& seq, std::size_t K, double exponent, const TailOptions& options) {
    if (const auto limit = seq.finite_size()) {
        if (K >= *limit) return 0.0;
        const auto values = seq.prefix(*limit);
        CompensatedSum sum;
        for (std::size_t k = K; k < *limit; ++k) sum += std::pow(values[k], -exponent);
        return sum.value();
    }

    const std::size_t last = K + std::max<std::size_t>(options.explicit_terms, 16);
    seq.realize(last);
    CompensatedSum sum;
    for (std::size_t k = K + 1; k <= last; ++k) sum += std::pow(seq.lambda(k), -exponent);

    // Local growth exponent of the counting function: n(t) ≈ n(T)(t/T)^κ beyond T.
    const double top = seq.lambda(last);
    const double mid = seq.lambda(last / 2);
    if (!(top > mid)) return std::numeric_limits<double>::infinity();
    const double kappa = std::log(2.0) / std::log(top / mid);
    if (exponent <= 1.02 * kappa) return std::numeric_limits<double>::infinity();
    const double extrapolated = static_cast<double>(last) * kappa / (exponent - kappa) * std::pow(top, -exponent);
    return sum.value() + 2.0 * extrapolated;
}

double genus_tail_bound(const PointConfiguration& cfg, std::size_t K, double abs_z, int genus,
                        const TailOptions& options) {
    const RadialSequence& seq = cfg.sequence();
    if (const auto limit = seq.finite_size(); limit && K >= *limit) return 0.0;
    if (abs_z == 0.0) return 0.0;
    if (seq.lambda(K + 1) < 2.0 * abs_z) return std::numeric_limits<double>::infinity();

    const double lead_exp = genus + 1.0;
    const double lead_scale = std::pow(abs_z, lead_exp) / lead_exp;
    double lead = lead_scale * power_tail(seq, K, lead_exp, options);
    if (cfg.angle_mode() == AngleMode::uniform) {
        const double variance = power_tail(seq, K, 2.0 * lead_exp, options);
        lead = std::min(lead, options.sigmas * lead_scale * std::sqrt(variance));
    }
    // Σ_{j≥d+2} |w|^j/j ≤ |w|^{d+2}/((d+2)(1−|w|)) ≤ 2|w|^{d+2}/(d+2) for |w| ≤ 1/2
    const double rest_exp = genus + 2.0;
    const double rest_scale = 2.0 * std::pow(abs_z, rest_exp) / rest_exp;
    double rest = rest_scale * power_tail(seq, K, rest_exp, options);
    if (cfg.angle_mode() == AngleMode::uniform) {
        // Each omitted factor has zero mean under uniform angles.
        rest = std::min(rest, options.sigmas * rest_scale * std::sqrt(power_tail(seq, K, 2.0 * rest_exp, options)));
    }
    return lead + rest;
}

namespace {

double correction_term(const Correction& correction, complex z) {
    return (-(correction.power_sum / static_cast<double>(correction.rho)) * std::pow(z, correction.rho)).real();
}

double correction_uncertainty(const Correction& correction, double abs_z, double sigmas) {
    return sigmas * correction.standard_error * std::pow(abs_z, correction.rho) / correction.rho;
}

}  // namespace

ProductValue log_product(const PointConfiguration& cfg, complex z, const GenusSpec& genus,
                         const TruncationPolicy& policy) {
    policy.validate();
    require(genus.genus >= 0, ErrorKind::domain, "genus must be nonnegative");
    const double abs_z = std::abs(z);
    const std::size_t origin = cfg.origin_multiplicity();
    if (origin > 0 && abs_z == 0.0) return ProductValue::exact_zero();

    const auto finite = cfg.sequence().finite_size();
    const auto clamp = [&](std::size_t k) { return finite ? std::min(k, *finite) : k; };

    std::size_t K = 0;
    double bound = 0.0;
    if (const auto* fixed = std::get_if<FixedTerms>(&policy.mode)) {
        K = clamp(fixed->K);
        cfg.realize(K);
        bound = genus_tail_bound(cfg, K, abs_z, genus.genus);
    } else {
        const double m = std::holds_alternative<RadiusMultiple>(policy.mode) ? std::get<RadiusMultiple>(policy.mode).m : 2.0;
        K = cfg.realize_radius(m * abs_z);
        if (K > policy.max_terms) {
            throw TruncationError("policy needs more than max_terms points to clear m|z|",
                                  std::numeric_limits<double>::infinity(), K);
        }
        const double target = std::holds_alternative<ErrorTarget>(policy.mode)
                                  ? std::get<ErrorTarget>(policy.mode).epsilon
                                  : policy.extension_target;
        bound = genus_tail_bound(cfg, K, abs_z, genus.genus);
        while (bound > target && K < policy.max_terms && !(finite && K >= *finite)) {
            K = clamp(std::min(policy.max_terms, std::max<std::size_t>(2 * K, 1024)));
            cfg.realize(K);
            bound = genus_tail_bound(cfg, K, abs_z, genus.genus);
        }
        if (std::holds_alternative<ErrorTarget>(policy.mode) && bound > target) {
            throw TruncationError("error target not reached within max_terms", bound, K);
        }
    }

    CompensatedSum sum;
    if (origin > 0) sum += static_cast<double>(origin) * std::log(abs_z);
    if (genus.correction) {
        sum += correction_term(*genus.correction, z);
        bound += correction_uncertainty(*genus.correction, abs_z, TailOptions{}.sigmas);
    }
    for (std::size_t k = 1; k <= K; ++k) {
        const complex w = z * std::polar(1.0 / cfg.lambda(k), -cfg.theta(k));
        // |z − z_k| = λ_k·|w − 1|
        if (std::norm(w - 1.0) < exact_zero_tolerance * exact_zero_tolerance) return ProductValue::exact_zero();
        sum += log_abs_elementary_factor(w, genus.genus);
    }
    return ProductValue{sum.value(), bound, false, K};
}

double expected_log_product(const RadialSequence& seq, double R) {
    require(R > 0.0, ErrorKind::domain, "expected_log_product needs R > 0");
    const std::size_t inside = seq.realize_radius(R);
    const double log_r = std::log(R);
    CompensatedSum sum;
    sum += static_cast<double>(seq.origin_multiplicity()) * log_r;
    const auto values = seq.prefix(inside);
    for (const double lambda : values) sum += log_r - std::log(lambda);
    return sum.value();
}

}  // namespace fockzero
