#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "fockzero/randomize.hpp"
#include "fockzero/sequences.hpp"
#include "fockzero/weight.hpp"

namespace fockzero {

using complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Elementary factors G(w; d) = (1 − w)·exp(w + w²/2 + ... + w^d/d)

/// Principal log G(w; d). Uses log(1 − w) + Σ_{j≤d} w^j/j for |w| > 1/2 and the tail
/// series −Σ_{j>d} w^j/j for |w| ≤ 1/2. Returns nullopt when w = 1 (G has a zero).
std::optional<complex> log_elementary_factor(complex w, int genus);

/// The two branches, exposed for cross-checking.
complex log_elementary_factor_direct(complex w, int genus);
complex log_elementary_factor_series(complex w, int genus);

/// Re log G(w; d) = log|G(w; d)|, same branch rule, without the imaginary bookkeeping.
double log_abs_elementary_factor(complex w, int genus);

// ---------------------------------------------------------------------------

/// Integer-order correction: the product is multiplied by exp(−(S/ρ)·z^ρ), where S is the
/// (partial) power sum Σ z_k^{−ρ}. With S = S_K this ties the genus-ρ product over K points
/// to the genus-(ρ−1) product over the same points exactly.
struct Correction {
    int rho = 2;
    complex power_sum{0.0, 0.0};
    /// Uncertainty of power_sum as an estimate of the infinite sum; widens tail bounds.
    double standard_error = 0.0;
    bool operator==(const Correction&) const = default;
};

struct GenusSpec {
    int genus = 0;
    std::optional<Correction> correction;
    bool operator==(const GenusSpec&) const = default;
};

enum class GenusConvention {
    floor_rho,  ///< genus ⌊ρ⌋; integer ρ gets genus ρ plus a correction
    genus_one,  ///< genus 1 without correction (classical ρ = 2 only)
};

GenusSpec genus_for(const WeightProfile& weight, GenusConvention convention = GenusConvention::floor_rho);

struct TailSum {
    complex partial{0.0, 0.0};  ///< S_K = Σ_{k≤K} z_k^{−ρ}
    double standard_error = 0.0;  ///< sqrt of Σ_{k>K} λ_k^{−2ρ}
};

TailSum tail_sum(const PointConfiguration& cfg, int rho, std::size_t K);

/// Fills the correction's power sum with S_K.
GenusSpec with_power_sum(GenusSpec genus, const TailSum& tail);

// ---------------------------------------------------------------------------

struct FixedTerms {
    std::size_t K = 0;
    bool operator==(const FixedTerms&) const = default;
};
/// Sum every point with λ_k < m|z| (m ≥ 2), then keep doubling until the tail bound drops
/// below `extension_target` or max_terms is reached.
struct RadiusMultiple {
    double m = 2.0;
    bool operator==(const RadiusMultiple&) const = default;
};
/// Smallest prefix whose tail bound is ≤ epsilon.
struct ErrorTarget {
    double epsilon = 1e-9;
    bool operator==(const ErrorTarget&) const = default;
};

struct TruncationPolicy {
    std::variant<FixedTerms, RadiusMultiple, ErrorTarget> mode = RadiusMultiple{};
    std::size_t max_terms = std::size_t{1} << 18;
    double extension_target = 1e-9;

    void validate() const;
    bool operator==(const TruncationPolicy&) const = default;
};

struct ProductValue {
    double log_modulus = 0.0;  ///< log|W(z)|, −∞ when is_exact_zero
    double tail_bound = 0.0;   ///< bound on the truncation error of log_modulus
    bool is_exact_zero = false;
    std::size_t terms = 0;

    static ProductValue exact_zero() {
        return {-std::numeric_limits<double>::infinity(), 0.0, true, 0};
    }
};

/// Relative distance below which z is treated as landing on a zero.
inline constexpr double exact_zero_tolerance = 1e-14;

ProductValue log_product(const PointConfiguration& cfg, complex z, const GenusSpec& genus,
                         const TruncationPolicy& policy = {});

/// E log|W(z)| on |z| = R: Σ_{λ_k<R} log(R/λ_k) + origin·log R.
double expected_log_product(const RadialSequence& seq, double R);

// ---------------------------------------------------------------------------
// Tail estimates

struct TailOptions {
    /// Explicit summation runs at least this far past K before extrapolating.
    std::size_t explicit_terms = 4096;
    /// Stochastic bounds use this many standard deviations.
    double sigmas = 6.0;
};

/// Σ_{k>K} λ_k^{−exponent}: explicit over a stretch past K, then the counting function is
/// extrapolated as a local power law. +∞ when the extrapolated series diverges.
double power_tail(const RadialSequence& seq, std::size_t K, double exponent, const TailOptions& options = {});

/// Bound on |Σ_{k>K} Re log G(z/z_k; d)|, assuming every omitted point has λ_k ≥ 2|z|.
double genus_tail_bound(const PointConfiguration& cfg, std::size_t K, double abs_z, int genus,
                        const TailOptions& options = {});

// ---------------------------------------------------------------------------

struct EvaluatorOptions {
    /// Points with λ_k < near_multiple·radius are summed factor by factor (> 1).
    double near_multiple = 2.0;
    /// Points beyond the near set up to this index enter through power sums.
    std::size_t far_terms = std::size_t{1} << 16;
    TailOptions tail;
};

/// Batch evaluator of log|W| on the disc |z| ≤ radius. Near points are summed directly;
/// the far points enter via their power sums P_j = Σ z_k^{−j}, so each evaluation costs
/// O(#near + J). Immutable after construction; safe to share between threads.
class ProductEvaluator {
public:
    ProductEvaluator(const PointConfiguration& cfg, const GenusSpec& genus, double radius,
                     const EvaluatorOptions& options = {});

    [[nodiscard]] ProductValue at(complex z) const;
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] std::size_t near_count() const noexcept { return near_inverse_.size(); }
    [[nodiscard]] std::size_t total_terms() const noexcept { return total_terms_; }
    [[nodiscard]] const std::vector<complex>& near_points() const noexcept { return near_points_; }
    /// Bound on the contribution of everything not summed (far series remainder plus the
    /// omitted tail beyond total_terms), valid for |z| ≤ radius.
    [[nodiscard]] double tail_bound() const noexcept { return tail_bound_; }

private:
    int genus_;
    std::size_t origin_;
    double radius_;
    std::optional<Correction> correction_;
    std::vector<complex> near_points_;
    std::vector<complex> near_inverse_;
    std::vector<complex> far_power_sums_;  // index j holds Σ_far (radius/z_k)^j, j > genus
    std::size_t total_terms_ = 0;
    double tail_bound_ = 0.0;
};

}  // namespace fockzero
