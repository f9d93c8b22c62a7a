#pragma once

#include <variant>

namespace fockzero {

/// φ(t) = α t² / 2, the classical Fock weight (α = 1 is F^p).
struct ClassicalWeight {
    double alpha = 1.0;
    bool operator==(const ClassicalWeight&) const = default;
};

/// φ(t) = t^ρ.
struct PowerWeight {
    double rho = 2.0;
    bool operator==(const PowerWeight&) const = default;
};

/// φ(t) = t^ρ (log t)^c, i.e. t^{ρ(t)} with the proximate order ρ(t) = ρ + c·log log t / log t.
/// Defined for t > 1.
struct LogPerturbedWeight {
    double rho = 2.0;
    double c = 0.0;
    bool operator==(const LogPerturbedWeight&) const = default;
};

using WeightKind = std::variant<ClassicalWeight, PowerWeight, LogPerturbedWeight>;

class WeightProfile {
public:
    explicit WeightProfile(WeightKind kind);

    static WeightProfile classical(double alpha = 1.0) { return WeightProfile(ClassicalWeight{alpha}); }
    static WeightProfile power(double rho) { return WeightProfile(PowerWeight{rho}); }
    static WeightProfile log_perturbed(double rho, double c) { return WeightProfile(LogPerturbedWeight{rho, c}); }

    [[nodiscard]] const WeightKind& kind() const noexcept { return kind_; }

    [[nodiscard]] double phi(double t) const;
    [[nodiscard]] double dphi(double t) const;
    /// t·φ′(t), the normaliser of the density ratio.
    [[nodiscard]] double t_dphi(double t) const { return t * dphi(t); }
    /// lim r φ′(r)/φ(r).
    [[nodiscard]] double rho_limit() const noexcept;
    /// ρ(t) with φ(t) = t^{ρ(t)}.
    [[nodiscard]] double proximate_order(double t) const;
    [[nodiscard]] double proximate_order_derivative(double t) const;
    [[nodiscard]] bool has_integer_order() const noexcept;

    bool operator==(const WeightProfile&) const = default;

private:
    WeightKind kind_;
};

}  // namespace fockzero
