#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fockzero/canonical_product.hpp"
#include "fockzero/randomize.hpp"
#include "fockzero/sequences.hpp"
#include "fockzero/weight.hpp"

namespace fockzero {

// ---------------------------------------------------------------------------
// Jensen-type uniqueness certificate

/// g(t) = t^{−γ}.
struct PowerDecay {
    double gamma = 0.5;
    bool operator==(const PowerDecay&) const = default;
};

enum class JensenStatus { certified_on_range, violated, inconclusive };

const char* to_string(JensenStatus status) noexcept;

struct JensenVerdict {
    JensenStatus status = JensenStatus::inconclusive;
    std::optional<double> first_violation_t;
    /// γp; the divergence hypothesis needs γp ≤ 1.
    std::optional<double> divergence_exponent;
    double M = 1.0;
    double T_max = 1.0;
    /// Tested points and n(t) − (tφ′(t) − γ − 1/p) at each of them.
    std::vector<double> grid;
    std::vector<double> margin;
};

/// Checks n(t) ≥ t(log g(t) + φ(t))′ − 1/p on a geometric grid over [M, T_max] plus every
/// λ_n in range. Evidence on the tested range only.
JensenVerdict jensen_certificate(const RadialSequence& seq, const WeightProfile& weight, double p, PowerDecay g,
                                 double M, double T_max, std::size_t grid_points = 1000);

// ---------------------------------------------------------------------------
// Uniqueness exponent

struct RadiusGrid {
    double r_min = 10.0;
    double r_max = 200.0;
    std::size_t count = 64;
    bool operator==(const RadiusGrid&) const = default;
};

struct ExponentFit {
    /// Slope c in D(R) ≈ −c log R + const; ±∞ when D(R) is not logarithmic (+∞: D falls
    /// faster, −∞: D grows).
    double c = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    bool logarithmic = true;
    std::vector<double> radii;
    std::vector<double> deficit;  ///< D(R) = 2·E log|W| − R²
};

/// Residual rms above which D(R) is declared non-logarithmic.
inline constexpr double exponent_fit_rms_limit = 0.5;

ExponentFit uniqueness_exponent_details(const RadialSequence& seq, const RadiusGrid& grid);
double uniqueness_exponent_fit(const RadialSequence& seq, const RadiusGrid& grid);

// ---------------------------------------------------------------------------
// Safe radii

/// R_k = (λ_k + λ_{k+1})/2.
double safe_radius(const RadialSequence& seq, std::size_t k);
/// ε_k = (λ_{k+1} − λ_k)/(4(λ_k + λ_{k+1})).
double exclusion_width(const RadialSequence& seq, std::size_t k);

struct SafeRadius {
    std::size_t k = 0;
    double radius = 0.0;
    double epsilon = 0.0;
};

/// The midpoint R_k closest to R among k with λ_k < λ_{k+1}.
SafeRadius nearest_safe_radius(const RadialSequence& seq, double R);

// ---------------------------------------------------------------------------
// Circle suprema

struct CircleSup {
    double sup_estimate = 0.0;
    double argmax_theta = 0.0;
    double grid_sup = 0.0;
    /// Grid points that landed on a zero and were skipped.
    std::size_t excluded = 0;
    std::vector<std::string> diagnostics;
};

/// N_k = max(2^10, min(k³, cap)).
std::size_t default_grid_size(std::size_t k, std::size_t cap = std::size_t{1} << 11);

/// max log|W| over N equidistant angles on |z| = R, then golden-section refinement around
/// the best few grid points.
CircleSup circle_sup_log(const ProductEvaluator& evaluator, double R, std::size_t N, std::size_t refine_iters);
CircleSup circle_sup_log(const PointConfiguration& cfg, const GenusSpec& genus, double R, std::size_t N,
                         std::size_t refine_iters, const EvaluatorOptions& options = {});

// ---------------------------------------------------------------------------
// Concentration experiment

enum class ThresholdRule {
    star,            ///< R²/2 − (a/8)·R·log^b R
    upper_envelope,  ///< R²/2 + R
};

struct ConcentrationOptions {
    std::vector<double> radii{20.0, 40.0, 60.0};
    std::size_t trials = 300;
    std::uint64_t seed = 0;
    double a = 2.0;
    double b = 2.0;
    ThresholdRule threshold = ThresholdRule::star;
    /// Fixed grid size; default_grid_size(k) when absent.
    std::optional<std::size_t> grid_points;
    std::size_t refine_iters = 24;
    /// Angle of the fixed point used for the centred deviation.
    double beta = 0.0;
    std::size_t threads = 0;
    EvaluatorOptions evaluator{1.25, std::size_t{1} << 16, {}};
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    double radius = 0.0;
    double sup = 0.0;
    double threshold = 0.0;
    bool violated = false;
    /// log|W(R e^{iβ})| − E log|W|.
    double deviation = 0.0;
    double tail_bound = 0.0;
};

struct RadiusAggregate {
    std::size_t k = 0;
    double radius = 0.0;
    double epsilon = 0.0;
    double expected = 0.0;
    double threshold = 0.0;
    std::size_t grid_points = 0;
    double violation_fraction = 0.0;
    double mean_sup = 0.0;
    double mean_deviation = 0.0;
    double sd_deviation = 0.0;
    /// min(1, N_k·exp(−2t²/Σ(2c_s)²)), t = (a/16)·R·log^b R.
    double predicted_bound = 0.0;
};

struct ExperimentReport {
    std::string experiment = "concentration";
    std::string fingerprint;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<TrialRecord> trials;
    std::vector<RadiusAggregate> aggregates;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
};

ExperimentReport concentration_experiment(const RadialSequence& seq, const GenusSpec& genus,
                                          const ConcentrationOptions& options);

double concentration_threshold(ThresholdRule rule, double R, double a, double b);

// ---------------------------------------------------------------------------
// Fock norm

struct NormEstimate {
    /// log ∫_{|z|<R_max} |W|^p e^{−pφ(|z|)} dm.
    double log_norm_p = 0.0;
    /// Log of the radial integrand at R_max.
    double truncation_note = 0.0;
    bool warning = false;
    std::string message;
    /// Same integral with each circle replaced by its grid maximum.
    double log_sup_bound = 0.0;
    double R_max = 0.0;
    std::size_t radial_nodes = 0;
    std::size_t angular_nodes = 0;
};

/// The integrand counts as significant at R_max when it exceeds the total by this much in log.
inline constexpr double norm_truncation_margin = -30.0;

NormEstimate fock_norm_estimate(const PointConfiguration& cfg, const GenusSpec& genus, const WeightProfile& weight,
                                double p, double R_max, std::size_t radial_nodes, std::size_t angular_nodes,
                                const EvaluatorOptions& options = {});

/// Smallest radius past which p·E log|W| − pφ(R) + log R stays below `floor`, scanning up
/// to `limit`. The angular mean of |W|^p sits well above exp(p·E log|W|), hence the deep floor.
double suggest_norm_radius(const RadialSequence& seq, const WeightProfile& weight, double p, double floor = -60.0,
                           double limit = 1e3);

// ---------------------------------------------------------------------------
// Hoeffding

/// exp(−2t²/Σ w_i²).
double hoeffding_bound(const std::vector<double>& widths, double t);

/// Widths 2c_s, c_s = log(1/ε_k) + R_k/λ_s, of the centred one-point terms for s ≤ k.
std::vector<double> one_point_widths(const RadialSequence& seq, std::size_t k);

/// Σ_{s≤k} (h_s(z) − log(R_k/λ_s)) at z = R_k e^{iβ}, h_s = log|G(z/z_s; 1)|.
double centered_one_point_sum(const PointConfiguration& cfg, std::size_t k, double beta);

// ---------------------------------------------------------------------------
// Indicator integrals

struct UniformMeasure {
    double mass = 1.0;
    bool operator==(const UniformMeasure&) const = default;
};

/// masses[i] spread uniformly over [breakpoints[i], breakpoints[i+1]) ⊂ [0, 2π].
struct PiecewiseMeasure {
    std::vector<double> breakpoints;
    std::vector<double> masses;
    bool operator==(const PiecewiseMeasure&) const = default;
};

using AngularDensityMeasure = std::variant<UniformMeasure, PiecewiseMeasure>;

void validate_measure(const AngularDensityMeasure& measure);

enum class IndicatorBranch { automatic, lp1, lp2 };

/// Non-integer ρ: π/sin(πρ) ∫ cos(ρ(θ−ψ−π)) dΔ(ψ). Integer ρ: −∫(ψ−θ)sin(ρ(ψ−θ)) dΔ(ψ)
/// + |δ|/ρ·cos(ρ(θ−arg δ)). Integrals over (θ−2π, θ).
double lp_indicator(const AngularDensityMeasure& measure, double rho, double theta,
                    std::optional<complex> delta = std::nullopt, IndicatorBranch branch = IndicatorBranch::automatic);

struct IndicatorComparison {
    std::vector<double> radii;
    std::vector<double> ratio;  ///< log|W(r e^{iθ})| / φ(r)
    std::vector<double> deviation;
    /// Indices of the worst 5% of radii by deviation, reported apart from the rest.
    std::vector<std::size_t> worst;
    double max_deviation_rest = 0.0;
    double mean_deviation_rest = 0.0;
};

IndicatorComparison compare_indicator(const PointConfiguration& cfg, const GenusSpec& genus,
                                      const WeightProfile& weight, double theta, double indicator,
                                      const RadiusGrid& grid, const TruncationPolicy& policy = {});

}  // namespace fockzero
