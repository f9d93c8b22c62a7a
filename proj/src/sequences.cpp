#include "fockzero/sequences.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>

#include "fockzero/error.hpp"

namespace fockzero {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void validate_family(const FamilySpec& spec) {
    std::visit(overloaded{
                   [](const SqrtShiftFamily& f) {
                       require(std::isfinite(f.alpha) && f.alpha > -1.0, ErrorKind::domain,
                               "sqrt_shift needs alpha > -1 so that every modulus is positive");
                   },
                   [](const ScaledSqrtFamily& f) {
                       require(std::isfinite(f.a) && f.a > 0.0, ErrorKind::domain, "scaled_sqrt needs a > 0");
                   },
                   [](const GaussLatticeFamily& f) {
                       require(std::isfinite(f.a) && f.a > 0.0, ErrorKind::domain, "gauss_lattice needs a > 0");
                   },
                   [](const CriticalFamily& f) {
                       require(std::isfinite(f.a) && f.a > 0.0, ErrorKind::domain, "critical needs a > 0");
                       require(std::isfinite(f.b) && f.b > 1.5, ErrorKind::domain, "critical needs b > 3/2");
                   },
                   [](const ExplicitFamily& f) {
                       for (std::size_t i = 0; i < f.values.size(); ++i) {
                           require(std::isfinite(f.values[i]) && f.values[i] > 0.0, ErrorKind::validation,
                                   "explicit moduli must be positive and finite");
                           require(i == 0 || f.values[i - 1] <= f.values[i], ErrorKind::validation,
                                   "explicit moduli must be nondecreasing");
                       }
                   },
               },
               spec);
}

}  // namespace

std::string family_name(const FamilySpec& spec) {
    return std::visit(overloaded{
                          [](const SqrtShiftFamily&) { return std::string("sqrt_shift"); },
                          [](const ScaledSqrtFamily&) { return std::string("scaled_sqrt"); },
                          [](const GaussLatticeFamily&) { return std::string("gauss_lattice"); },
                          [](const CriticalFamily&) { return std::string("critical"); },
                          [](const ExplicitFamily&) { return std::string("explicit"); },
                      },
                      spec);
}

namespace detail {

class SequenceStore {
public:
    explicit SequenceStore(FamilySpec spec) : spec_(std::move(spec)) {
        if (const auto* list = std::get_if<ExplicitFamily>(&spec_)) {
            finite_size_ = list->values.size();
            origin_ = list->origin_multiplicity;
        } else if (const auto* lattice = std::get_if<GaussLatticeFamily>(&spec_)) {
            origin_ = 1;
            lattice_scale_ = std::sqrt(lattice->a * std::numbers::pi);
        }
    }

    const FamilySpec& spec() const noexcept { return spec_; }
    std::size_t origin() const noexcept { return origin_; }
    std::optional<std::size_t> finite_size() const noexcept { return finite_size_; }
    std::size_t size() const noexcept { return size_.load(std::memory_order_acquire); }

    void realize(std::size_t count) {
        if (finite_size_) count = std::min(count, *finite_size_);
        if (size() >= count) return;
        std::lock_guard lock(mutex_);
        while (size_.load(std::memory_order_relaxed) < count) append_block();
    }

    // Callers only read indices below a size they have observed, so published blocks suffice.
    double at(std::size_t index) const {
        return directory_[index / RadialSequence::block_size].load(std::memory_order_acquire)
            [index % RadialSequence::block_size];
    }

    std::vector<double> copy(std::size_t count) const {
        count = std::min(count, size());
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(at(i));
        return out;
    }

    /// #{i < size : λ_{i+1} < t} over the realized prefix.
    std::size_t lower_bound(double t) const {
        std::size_t lo = 0;
        std::size_t hi = size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (at(mid) < t) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

private:
    void append_block() {
        const std::size_t start = size_.load(std::memory_order_relaxed);
        std::size_t count = RadialSequence::block_size;
        if (finite_size_) count = std::min(count, *finite_size_ - start);
        auto block = std::make_unique<std::vector<double>>();
        block->reserve(count);
        std::visit(overloaded{
                       [&](const SqrtShiftFamily& f) {
                           for (std::size_t i = 0; i < count; ++i) {
                               block->push_back(std::sqrt(static_cast<double>(start + i + 1) + f.alpha));
                           }
                       },
                       [&](const ScaledSqrtFamily& f) {
                           for (std::size_t i = 0; i < count; ++i) {
                               block->push_back(f.a * std::sqrt(static_cast<double>(start + i + 1)));
                           }
                       },
                       [&](const CriticalFamily& f) {
                           for (std::size_t i = 0; i < count; ++i) {
                               const double n = static_cast<double>(start + i + 1);
                               block->push_back(std::sqrt(n + f.a * std::sqrt(n) * std::pow(std::log(n), f.b)));
                           }
                       },
                       [&](const GaussLatticeFamily&) { fill_lattice(*block, count); },
                       [&](const ExplicitFamily& f) {
                           block->assign(f.values.begin() + static_cast<std::ptrdiff_t>(start),
                                         f.values.begin() + static_cast<std::ptrdiff_t>(start + count));
                       },
                   },
                   spec_);
        const std::size_t slot = blocks_.size();
        require(slot < max_blocks, ErrorKind::numerical, "sequence cache capacity exceeded");
        directory_[slot].store(block->data(), std::memory_order_release);
        blocks_.push_back(std::move(block));
        size_.store(start + count, std::memory_order_release);
    }

    // Lattice norms m = b² + c² are enumerated exactly (as integers) for all m up to a bound,
    // so every emitted prefix is complete regardless of how far the enumeration has gone.
    void fill_lattice(std::vector<double>& block, std::size_t count) {
        while (pending_.size() - pending_pos_ < count) extend_lattice(size_.load() + count);
        for (std::size_t i = 0; i < count; ++i) {
            block.push_back(lattice_scale_ * std::sqrt(static_cast<double>(pending_[pending_pos_ + i])));
        }
        pending_pos_ += count;
        if (pending_pos_ > (std::size_t{1} << 20)) {
            pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(pending_pos_));
            pending_pos_ = 0;
        }
    }

    void extend_lattice(std::size_t total_needed) {
        // N(√M) ≈ πM lattice points with 0 < b² + c² ≤ M.
        const double want = 1.1 * static_cast<double>(total_needed) / std::numbers::pi + 16.0;
        std::uint64_t bound = std::max<std::uint64_t>(2 * enumerated_bound_, static_cast<std::uint64_t>(want));
        const auto half = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(bound)))) + 1;
        std::vector<std::uint64_t> fresh;
        for (std::int64_t b = -half; b <= half; ++b) {
            for (std::int64_t c = -half; c <= half; ++c) {
                const auto m = static_cast<std::uint64_t>(b * b + c * c);
                if (m > enumerated_bound_ && m <= bound) fresh.push_back(m);
            }
        }
        std::sort(fresh.begin(), fresh.end());
        pending_.insert(pending_.end(), fresh.begin(), fresh.end());
        enumerated_bound_ = bound;
    }

    FamilySpec spec_;
    std::size_t origin_ = 0;
    std::optional<std::size_t> finite_size_;
    double lattice_scale_ = 1.0;

    static constexpr std::size_t max_blocks = 4096;

    std::mutex mutex_;
    std::vector<std::unique_ptr<std::vector<double>>> blocks_;
    std::unique_ptr<std::atomic<const double*>[]> directory_ =
        std::make_unique<std::atomic<const double*>[]>(max_blocks);
    std::atomic<std::size_t> size_{0};

    std::vector<std::uint64_t> pending_;
    std::size_t pending_pos_ = 0;
    std::uint64_t enumerated_bound_ = 0;
};

}  // namespace detail

RadialSequence::RadialSequence(FamilySpec spec) {
    validate_family(spec);
    store_ = std::make_shared<detail::SequenceStore>(std::move(spec));
}

const FamilySpec& RadialSequence::family() const noexcept { return store_->spec(); }

std::size_t RadialSequence::origin_multiplicity() const noexcept { return store_->origin(); }

std::optional<std::size_t> RadialSequence::finite_size() const noexcept { return store_->finite_size(); }

double RadialSequence::lambda(std::size_t n) const {
    require(n >= 1, ErrorKind::domain, "sequence indices start at 1");
    if (const auto limit = finite_size(); limit && n > *limit) {
        fail(ErrorKind::domain, "index beyond the end of a finite sequence");
    }
    store_->realize(n);
    return store_->at(n - 1);
}

std::size_t RadialSequence::realized() const noexcept { return store_->size(); }

void RadialSequence::realize(std::size_t count) const { store_->realize(count); }

std::size_t RadialSequence::realize_radius(double t) const {
    for (;;) {
        const std::size_t size = store_->size();
        const bool exhausted = finite_size() && size == *finite_size();
        if (exhausted || (size > 0 && store_->at(size - 1) >= t)) break;
        store_->realize(size + block_size);
    }
    return store_->lower_bound(t);
}

std::vector<double> RadialSequence::prefix(std::size_t count) const {
    realize(count);
    return store_->copy(count);
}

RadialSequence make_sequence(FamilySpec spec) { return RadialSequence(std::move(spec)); }

std::size_t count_below(const RadialSequence& seq, double t) {
    require(t > 0.0 && !std::isnan(t), ErrorKind::domain, "count_below needs t > 0");
    return seq.realize_radius(t) + seq.origin_multiplicity();
}

// ---------------------------------------------------------------------------

void CountingWindow::validate() const {
    require(t_min >= 1.0, ErrorKind::domain, "counting window needs t_min >= 1");
    require(t_max > t_min, ErrorKind::domain, "counting window needs t_max > t_min");
    require(samples >= 2, ErrorKind::domain, "counting window needs at least 2 samples");
}

std::vector<double> CountingWindow::points() const {
    validate();
    std::vector<double> out(samples);
    const double last = static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = static_cast<double>(i) / last;
        out[i] = spacing == Spacing::linear ? t_min + (t_max - t_min) * u
                                            : t_min * std::pow(t_max / t_min, u);
    }
    out.back() = t_max;
    return out;
}

const char* to_string(DensityLabel label) noexcept {
    switch (label) {
        case DensityLabel::subcritical: return "subcritical";
        case DensityLabel::critical: return "critical";
        case DensityLabel::supercritical: return "supercritical";
        case DensityLabel::undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace {

struct LinearFit {
    Eigen::VectorXd coefficients;
    double rss = 0.0;
    double intercept_stderr = 0.0;
    bool ok = false;
};

LinearFit least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    LinearFit fit;
    const auto rows = design.rows();
    const auto cols = design.cols();
    if (rows <= cols) return fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) return fit;
    fit.coefficients = qr.solve(y);
    fit.rss = (y - design * fit.coefficients).squaredNorm();
    const Eigen::MatrixXd gram_inv = (design.transpose() * design).inverse();
    const double sigma2 = fit.rss / static_cast<double>(rows - cols);
    fit.intercept_stderr = std::sqrt(std::max(0.0, gram_inv(0, 0) * sigma2));
    fit.ok = std::isfinite(fit.coefficients(0));
    return fit;
}

double bic(double rss, std::size_t n, std::size_t k) {
    const double nn = static_cast<double>(n);
    return nn * std::log(std::max(rss, 1e-300) / nn) + static_cast<double>(k) * std::log(nn);
}

}  // namespace

DensityClassification classify_density(const RadialSequence& seq, const WeightProfile& weight,
                                       const CountingWindow& window, const ClassifyOptions& options) {
    window.validate();
    if (const auto limit = seq.finite_size()) {
        require(*limit > 0 && seq.lambda(*limit) >= window.t_max, ErrorKind::validation,
                "counting window extends beyond the finite sequence");
    }

    const std::vector<double> ts = window.points();
    const auto n = static_cast<Eigen::Index>(ts.size());
    Eigen::VectorXd ratio(n);
    std::vector<double> counts(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        counts[i] = static_cast<double>(count_below(seq, ts[i]));
        ratio(static_cast<Eigen::Index>(i)) = counts[i] / weight.t_dphi(ts[i]);
    }

    DensityClassification out;
    double best_bic = std::numeric_limits<double>::infinity();
    LinearFit best;

    if (window.t_min > 1.0) {
        Eigen::MatrixXd design(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t = ts[static_cast<std::size_t>(i)];
            design(i, 0) = 1.0;
            design(i, 1) = 1.0 / std::log(t);
            design(i, 2) = 1.0 / t;
        }
        if (auto fit = least_squares(design, ratio); fit.ok) {
            best_bic = bic(fit.rss, ts.size(), 3);
            best = fit;
            out.model = "inverse_log_inverse_t";
            out.model_exponent = 0.0;
        }
    }

    // Excess profile driven by the observed count: A − c·√n·log^β n / (tφ′).
    for (int step = 0; step <= 60; ++step) {
        const double beta = 0.1 * step;
        Eigen::MatrixXd design(n, 2);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double count = std::max(counts[idx], 1.0);
            design(i, 0) = 1.0;
            design(i, 1) = std::sqrt(count) * std::pow(std::log(count), beta) / weight.t_dphi(ts[idx]);
        }
        auto fit = least_squares(design, ratio);
        if (!fit.ok) continue;
        const double score = bic(fit.rss, ts.size(), 3);  // β counts as a parameter
        if (score < best_bic) {
            best_bic = score;
            best = fit;
            out.model = "count_scaled_log_power";
            out.model_exponent = beta;
        }
    }

    if (!best.ok) {
        out.label = DensityLabel::undetermined;
        out.diagnostic = "window too small or degenerate to fit";
        return out;
    }

    out.A_estimate = best.coefficients(0);
    out.A_stderr = best.intercept_stderr;
    const double rms = std::sqrt(best.rss / static_cast<double>(ts.size()));
    out.fit_residual = rms / std::max(std::fabs(out.A_estimate), 1e-12);

    const double upper = out.A_estimate + options.confidence_z * out.A_stderr;
    const double lower = out.A_estimate - options.confidence_z * out.A_stderr;
    if (upper < 1.0 - options.tau) {
        out.label = DensityLabel::subcritical;
    } else if (lower > 1.0 + options.tau) {
        out.label = DensityLabel::supercritical;
    } else if (std::fabs(out.A_estimate - 1.0) <= options.tau && out.fit_residual < options.residual_threshold) {
        out.label = DensityLabel::critical;
    } else {
        out.label = DensityLabel::undetermined;
        out.diagnostic = "estimate not separated from 1 at the configured tolerance";
    }
    return out;
}

DeficitFit critical_deficit_fit(const RadialSequence& seq, double b, const CountingWindow& window) {
    window.validate();
    require(std::holds_alternative<CriticalFamily>(seq.family()) || std::holds_alternative<ExplicitFamily>(seq.family()),
            ErrorKind::validation, "deficit fit applies to critical or explicit sequences");
    if (const auto limit = seq.finite_size()) {
        require(*limit > 0 && seq.lambda(*limit) >= window.t_max, ErrorKind::validation,
                "counting window extends beyond the finite sequence");
    }

    double num = 0.0;
    double den = 0.0;
    double literal_num = 0.0;
    double literal_den = 0.0;
    std::vector<double> ratios;
    for (const double t : window.points()) {
        const auto count = static_cast<double>(count_below(seq, t));
        const double deficit = t * t - count;
        if (deficit <= 0.0) {
            fail(ErrorKind::fit, "nonpositive deficit t^2 - n(t) at t = " + std::to_string(t) +
                                     "; raise the window start");
        }
        if (count < 2.0) continue;
        const double scale = std::sqrt(count) * std::pow(std::log(count), b);
        const double literal_scale = t * std::pow(std::log(t * t), b);
        num += deficit * scale;
        den += scale * scale;
        literal_num += deficit * literal_scale;
        literal_den += literal_scale * literal_scale;
        ratios.push_back(deficit / scale);
    }
    require(!ratios.empty(), ErrorKind::fit, "no window point with n(t) >= 2");

    DeficitFit out;
    out.a_estimate = num / den;
    out.literal_estimate = literal_num / literal_den;
    out.points = ratios.size();
    double rss = 0.0;
    for (const double r : ratios) rss += (r - out.a_estimate) * (r - out.a_estimate);
    out.rms_residual = std::sqrt(rss / static_cast<double>(ratios.size()));
    return out;
}

}  // namespace fockzero
