#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fockzero/weight.hpp"

namespace fockzero {

/// λ_n = √(n + α), n ≥ 1. Requires α > −1.
struct SqrtShiftFamily {
    double alpha = 0.0;
    bool operator==(const SqrtShiftFamily&) const = default;
};

/// λ_n = a√n.
struct ScaledSqrtFamily {
    double a = 1.0;
    bool operator==(const ScaledSqrtFamily&) const = default;
};

/// Moduli of √(aπ)(ℤ + iℤ) in nondecreasing order; the lattice origin is kept as
/// origin multiplicity 1 rather than as a zero modulus.
struct GaussLatticeFamily {
    double a = 1.0;
    bool operator==(const GaussLatticeFamily&) const = default;
};

/// λ_n² = n + a√n·log^b n (the o(1) term fixed to zero). Requires a > 0, b > 3/2.
struct CriticalFamily {
    double a = 1.0;
    double b = 2.0;
    bool operator==(const CriticalFamily&) const = default;
};

/// A finite, user-supplied nondecreasing list of positive moduli.
struct ExplicitFamily {
    std::vector<double> values;
    std::size_t origin_multiplicity = 0;
    bool operator==(const ExplicitFamily&) const = default;
};

using FamilySpec = std::variant<SqrtShiftFamily, ScaledSqrtFamily, GaussLatticeFamily, CriticalFamily, ExplicitFamily>;

/// Stable machine name: sqrt_shift, scaled_sqrt, gauss_lattice, critical, explicit.
std::string family_name(const FamilySpec& spec);

namespace detail {
class SequenceStore;
}

/// A nondecreasing sequence of moduli λ_1 ≤ λ_2 ≤ ... (1-based), realized lazily in blocks
/// of 2^16 and cached. Copies share the cache. The realized prefix never depends on the
/// order in which indices were requested; concurrent readers are safe.
class RadialSequence {
public:
    static constexpr std::size_t block_size = std::size_t{1} << 16;

    explicit RadialSequence(FamilySpec spec);

    [[nodiscard]] const FamilySpec& family() const noexcept;
    [[nodiscard]] std::size_t origin_multiplicity() const noexcept;
    /// Number of moduli for finite (explicit) sequences.
    [[nodiscard]] std::optional<std::size_t> finite_size() const noexcept;

    /// λ_n for n ≥ 1, realizing the prefix as needed.
    [[nodiscard]] double lambda(std::size_t n) const;
    [[nodiscard]] std::size_t realized() const noexcept;
    /// Realizes at least min(count, finite_size) moduli.
    void realize(std::size_t count) const;
    /// Realizes every modulus < t (and at least one ≥ t unless the sequence is finite);
    /// returns #{n : λ_n < t}.
    std::size_t realize_radius(double t) const;
    /// Copy of λ_1..λ_count (count clamped to the finite size).
    [[nodiscard]] std::vector<double> prefix(std::size_t count) const;

private:
    std::shared_ptr<detail::SequenceStore> store_;
};

RadialSequence make_sequence(FamilySpec spec);

/// n(t) = #{n : λ_n < t} + origin multiplicity. Strict inequality; t must be positive.
std::size_t count_below(const RadialSequence& seq, double t);

enum class Spacing { linear, geometric };

struct CountingWindow {
    double t_min = 1.0;
    double t_max = 10.0;
    std::size_t samples = 200;
    Spacing spacing = Spacing::geometric;

    void validate() const;
    [[nodiscard]] std::vector<double> points() const;
    bool operator==(const CountingWindow&) const = default;
};

enum class DensityLabel { subcritical, critical, supercritical, undetermined };

const char* to_string(DensityLabel label) noexcept;

struct ClassifyOptions {
    double tau = 0.05;
    /// Upper limit on the rms fit residual (relative to the estimate) for a `critical` label.
    double residual_threshold = 0.02;
    /// Half-width of the confidence interval in standard errors.
    double confidence_z = 3.0;
};

struct DensityClassification {
    DensityLabel label = DensityLabel::undetermined;
    double A_estimate = 0.0;
    double A_stderr = 0.0;
    double fit_residual = 0.0;
    /// Which correction model won the BIC comparison.
    std::string model;
    double model_exponent = 0.0;
    std::string diagnostic;
};

/// Estimates A = lim n(t)/(tφ′(t)) over the window and labels the density against 1 ± τ.
DensityClassification classify_density(const RadialSequence& seq, const WeightProfile& weight,
                                       const CountingWindow& window, const ClassifyOptions& options = {});

struct DeficitFit {
    /// Least-squares a from t² − n(t) ≈ a·√n(t)·log^b n(t).
    double a_estimate = 0.0;
    /// Same deficit normalised by t·log^b t² directly; converges much more slowly.
    double literal_estimate = 0.0;
    double rms_residual = 0.0;
    std::size_t points = 0;
};

/// Recovers the deficit constant a in n(t) = t² − (a + o(1))·t·log^b t².
DeficitFit critical_deficit_fit(const RadialSequence& seq, double b, const CountingWindow& window);

}  // namespace fockzero
