#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockzero/diagnostics.hpp"
#include "fockzero/error.hpp"
#include "fockzero/parallel.hpp"

namespace fockzero {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
    double top = neg_inf;
    for (double t : terms) top = std::max(top, t);
    if (top == neg_inf) return neg_inf;
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - top);
    return top + std::log(sum);
}

// Trapezoid with third-order endpoint corrections; error O(h^4) for smooth integrands.
double radial_weight(std::size_t i, std::size_t n) {
    static constexpr double ends[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    if (i < 4) return ends[i];
    if (n - 1 - i < 4) return ends[n - 1 - i];
    return 1.0;
}

}  // namespace

NormEstimate fock_norm_estimate(const PointConfiguration& cfg, const GenusSpec& genus, const WeightProfile& weight,
                                double p, double R_max, std::size_t radial_nodes, std::size_t angular_nodes,
                                const EvaluatorOptions& options) {
    require(p > 0.0, ErrorKind::domain, "p must be positive");
    require(R_max > 0.0, ErrorKind::domain, "R_max must be positive");
    require(radial_nodes >= 8, ErrorKind::domain, "at least 8 radial nodes are required");
    require(angular_nodes >= 1, ErrorKind::domain, "at least 1 angular node is required");
    require(!std::holds_alternative<LogPerturbedWeight>(weight.kind()), ErrorKind::domain,
            "the log-perturbed weight is undefined on the unit disc; use a classical or power weight");

    const ProductEvaluator evaluator(cfg, genus, R_max, options);
    const double h = R_max / static_cast<double>(radial_nodes - 1);
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angular_nodes);
    std::vector<double> mean_terms(radial_nodes, neg_inf);
    std::vector<double> sup_terms(radial_nodes, neg_inf);

    parallel_for(radial_nodes, [&](std::size_t i) {
        if (i == 0) return;  // the r dr measure vanishes at the origin
        const double r = h * static_cast<double>(i);
        std::vector<double> values(angular_nodes);
        double top = neg_inf;
        for (std::size_t j = 0; j < angular_nodes; ++j) {
            const ProductValue v = evaluator.at(std::polar(r, dtheta * static_cast<double>(j)));
            values[j] = v.is_exact_zero ? neg_inf : p * v.log_modulus;
            top = std::max(top, values[j]);
        }
        const double radial = -p * weight.phi(r) + std::log(r);
        mean_terms[i] = log_sum_exp(values) + std::log(dtheta) + radial;
        sup_terms[i] = top + std::log(2.0 * std::numbers::pi) + radial;
    });

    std::vector<double> weighted(radial_nodes), weighted_sup(radial_nodes);
    for (std::size_t i = 0; i < radial_nodes; ++i) {
        const double w = std::log(h * radial_weight(i, radial_nodes));
        weighted[i] = mean_terms[i] + w;
        weighted_sup[i] = sup_terms[i] + w;
    }

    NormEstimate out;
    out.log_norm_p = log_sum_exp(weighted);
    out.log_sup_bound = log_sum_exp(weighted_sup);
    out.truncation_note = mean_terms.back();
    out.R_max = R_max;
    out.radial_nodes = radial_nodes;
    out.angular_nodes = angular_nodes;
    if (out.truncation_note - out.log_norm_p > norm_truncation_margin) {
        out.warning = true;
        out.message = "integrand is still significant at R_max; the estimate is truncated";
    }
    return out;
}

double suggest_norm_radius(const RadialSequence& seq, const WeightProfile& weight, double p, double floor,
                           double limit) {
    require(p > 0.0, ErrorKind::domain, "p must be positive");
    require(limit > 1.0, ErrorKind::domain, "scan limit must exceed 1");
    auto integrand = [&](double R) { return p * expected_log_product(seq, R) - p * weight.phi(R) + std::log(R); };
    const double step = 0.25;
    double previous = integrand(1.0 + step);
    for (double R = 1.0 + 2.0 * step; R <= limit; R += step) {
        const double current = integrand(R);
        if (current < floor && current < previous) return R;
        previous = current;
    }
    fail(ErrorKind::numerical, "integrand does not become negligible below the scan limit");
}

}  // namespace fockzero
