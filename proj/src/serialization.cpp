#include "fockzero/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include "fockzero/error.hpp"

namespace fockzero {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

const json& field(const json& j, const char* key) {
    require(j.is_object(), ErrorKind::validation, std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    require(it != j.end(), ErrorKind::validation, std::string("missing field '") + key + "'");
    return *it;
}

double real_field(const json& j, const char* key) {
    try {
        return number_from(field(j, key));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(ErrorKind::validation, std::string("field '") + key + "' must be a number");
    }
}

double real_field_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? real_field(j, key) : fallback;
}

template <class T>
T unsigned_field(const json& j, const char* key) {
    const json& v = field(j, key);
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorKind::validation,
            std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<T>();
}

std::string normalise_name(std::string name) {
    for (char& c : name) {
        if (c == '-') c = '_';
    }
    return name;
}

}  // namespace

std::string fingerprint(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    static constexpr char digits[] = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buffer[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    buffer[16] = '\0';
    return buffer;
}

json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    fail(ErrorKind::validation, "expected a number");
}

std::string format_number(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
    return std::string(buffer, result.ptr);
}

json to_json(const FamilySpec& spec) {
    json params = std::visit(overloaded{
                                 [](const SqrtShiftFamily& f) { return json{{"alpha", number(f.alpha)}}; },
                                 [](const ScaledSqrtFamily& f) { return json{{"a", number(f.a)}}; },
                                 [](const GaussLatticeFamily& f) { return json{{"a", number(f.a)}}; },
                                 [](const CriticalFamily& f) { return json{{"a", number(f.a)}, {"b", number(f.b)}}; },
                                 [](const ExplicitFamily& f) {
                                     json values = json::array();
                                     for (double v : f.values) values.push_back(number(v));
                                     return json{{"values", values}, {"origin_multiplicity", f.origin_multiplicity}};
                                 },
                             },
                             spec);
    return json{{"family", family_name(spec)}, {"params", params}};
}

FamilySpec family_from_json(const json& j) {
    const json& name_field = field(j, "family");
    require(name_field.is_string(), ErrorKind::validation, "'family' must be a string");
    const std::string name = normalise_name(name_field.get<std::string>());
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (name == "sqrt_shift") return SqrtShiftFamily{real_field_or(params, "alpha", 0.0)};
    if (name == "scaled_sqrt") return ScaledSqrtFamily{real_field_or(params, "a", 1.0)};
    if (name == "gauss_lattice") return GaussLatticeFamily{real_field_or(params, "a", 1.0)};
    if (name == "critical") return CriticalFamily{real_field_or(params, "a", 1.0), real_field_or(params, "b", 2.0)};
    if (name == "explicit") {
        ExplicitFamily f;
        const json& values = field(params, "values");
        require(values.is_array(), ErrorKind::validation, "'values' must be an array");
        for (const auto& v : values) f.values.push_back(number_from(v));
        if (params.contains("origin_multiplicity")) f.origin_multiplicity = unsigned_field<std::size_t>(params, "origin_multiplicity");
        return f;
    }
    fail(ErrorKind::validation, "unknown family '" + name + "'");
}

json to_json(const WeightProfile& weight) {
    return std::visit(overloaded{
                          [](const ClassicalWeight& w) { return json{{"kind", "classical"}, {"alpha", number(w.alpha)}}; },
                          [](const PowerWeight& w) { return json{{"kind", "power"}, {"rho", number(w.rho)}}; },
                          [](const LogPerturbedWeight& w) {
                              return json{{"kind", "log_perturbed"}, {"rho", number(w.rho)}, {"c", number(w.c)}};
                          },
                      },
                      weight.kind());
}

WeightProfile weight_from_json(const json& j) {
    const json& kind_field = field(j, "kind");
    require(kind_field.is_string(), ErrorKind::validation, "'kind' must be a string");
    const std::string kind = normalise_name(kind_field.get<std::string>());
    if (kind == "classical") return WeightProfile::classical(real_field_or(j, "alpha", 1.0));
    if (kind == "power") return WeightProfile::power(real_field(j, "rho"));
    if (kind == "log_perturbed") return WeightProfile::log_perturbed(real_field(j, "rho"), real_field(j, "c"));
    fail(ErrorKind::validation, "unknown weight kind '" + kind + "'");
}

json to_json(const GenusSpec& genus) {
    json out{{"genus", genus.genus}, {"correction", nullptr}};
    if (genus.correction) {
        const Correction& c = *genus.correction;
        out["correction"] = json{{"rho", c.rho},
                                 {"power_sum", json::array({number(c.power_sum.real()), number(c.power_sum.imag())})},
                                 {"standard_error", number(c.standard_error)}};
    }
    return out;
}

GenusSpec genus_from_json(const json& j) {
    GenusSpec genus;
    const json& g = field(j, "genus");
    require(g.is_number_integer() && g.get<int>() >= 0, ErrorKind::validation, "'genus' must be a nonnegative integer");
    genus.genus = g.get<int>();
    if (j.contains("correction") && !j.at("correction").is_null()) {
        const json& c = j.at("correction");
        Correction correction;
        correction.rho = field(c, "rho").get<int>();
        if (c.contains("power_sum")) {
            const json& s = c.at("power_sum");
            require(s.is_array() && s.size() == 2, ErrorKind::validation, "'power_sum' must be [re, im]");
            correction.power_sum = complex(number_from(s[0]), number_from(s[1]));
        }
        correction.standard_error = real_field_or(c, "standard_error", 0.0);
        genus.correction = correction;
    }
    return genus;
}

json to_json(const TruncationPolicy& policy) {
    json out = std::visit(overloaded{
                              [](const FixedTerms& m) { return json{{"mode", "fixed"}, {"K", m.K}}; },
                              [](const RadiusMultiple& m) { return json{{"mode", "radius_multiple"}, {"m", number(m.m)}}; },
                              [](const ErrorTarget& m) {
                                  return json{{"mode", "error_target"}, {"epsilon", number(m.epsilon)}};
                              },
                          },
                          policy.mode);
    out["max_terms"] = policy.max_terms;
    out["extension_target"] = number(policy.extension_target);
    return out;
}

TruncationPolicy truncation_from_json(const json& j) {
    TruncationPolicy policy;
    const std::string mode = normalise_name(field(j, "mode").get<std::string>());
    if (mode == "fixed") {
        policy.mode = FixedTerms{unsigned_field<std::size_t>(j, "K")};
    } else if (mode == "radius_multiple") {
        policy.mode = RadiusMultiple{real_field_or(j, "m", 2.0)};
    } else if (mode == "error_target") {
        policy.mode = ErrorTarget{real_field(j, "epsilon")};
    } else {
        fail(ErrorKind::validation, "unknown truncation mode '" + mode + "'");
    }
    if (j.contains("max_terms")) policy.max_terms = unsigned_field<std::size_t>(j, "max_terms");
    policy.extension_target = real_field_or(j, "extension_target", policy.extension_target);
    policy.validate();
    return policy;
}

json to_json(const CountingWindow& window) {
    return json{{"t_min", number(window.t_min)},
                {"t_max", number(window.t_max)},
                {"samples", window.samples},
                {"spacing", window.spacing == Spacing::linear ? "linear" : "geometric"}};
}

CountingWindow window_from_json(const json& j) {
    CountingWindow window;
    window.t_min = real_field(j, "t_min");
    window.t_max = real_field(j, "t_max");
    if (j.contains("samples")) window.samples = unsigned_field<std::size_t>(j, "samples");
    if (j.contains("spacing")) {
        const std::string spacing = j.at("spacing").get<std::string>();
        require(spacing == "linear" || spacing == "geometric", ErrorKind::validation, "unknown spacing '" + spacing + "'");
        window.spacing = spacing == "linear" ? Spacing::linear : Spacing::geometric;
    }
    window.validate();
    return window;
}

json to_json(const ConcentrationOptions& options) {
    json radii = json::array();
    for (double r : options.radii) radii.push_back(number(r));
    return json{{"radii", radii},
                {"trials", options.trials},
                {"seed", options.seed},
                {"a", number(options.a)},
                {"b", number(options.b)},
                {"threshold", options.threshold == ThresholdRule::star ? "star" : "upper_envelope"},
                {"grid_points", options.grid_points ? json(*options.grid_points) : json(nullptr)},
                {"refine_iters", options.refine_iters},
                {"beta", number(options.beta)},
                {"near_multiple", number(options.evaluator.near_multiple)},
                {"far_terms", options.evaluator.far_terms}};
}

ConcentrationOptions concentration_options_from_json(const json& j) {
    ConcentrationOptions options;
    if (j.contains("radii")) {
        options.radii.clear();
        for (const auto& r : j.at("radii")) options.radii.push_back(number_from(r));
    }
    if (j.contains("trials")) options.trials = unsigned_field<std::size_t>(j, "trials");
    if (j.contains("seed")) options.seed = unsigned_field<std::uint64_t>(j, "seed");
    options.a = real_field_or(j, "a", options.a);
    options.b = real_field_or(j, "b", options.b);
    if (j.contains("threshold")) {
        const std::string rule = normalise_name(j.at("threshold").get<std::string>());
        require(rule == "star" || rule == "upper_envelope", ErrorKind::validation, "unknown threshold rule '" + rule + "'");
        options.threshold = rule == "star" ? ThresholdRule::star : ThresholdRule::upper_envelope;
    }
    if (j.contains("grid_points") && !j.at("grid_points").is_null()) {
        options.grid_points = unsigned_field<std::size_t>(j, "grid_points");
    }
    if (j.contains("refine_iters")) options.refine_iters = unsigned_field<std::size_t>(j, "refine_iters");
    options.beta = real_field_or(j, "beta", options.beta);
    options.evaluator.near_multiple = real_field_or(j, "near_multiple", options.evaluator.near_multiple);
    if (j.contains("far_terms")) options.evaluator.far_terms = unsigned_field<std::size_t>(j, "far_terms");
    return options;
}

json to_json(const ProductValue& value) {
    return json{{"log_modulus", value.is_exact_zero ? json(nullptr) : number(value.log_modulus)},
                {"tail_bound", number(value.tail_bound)},
                {"is_exact_zero", value.is_exact_zero},
                {"terms", value.terms}};
}

json to_json(const DensityClassification& result) {
    return json{{"label", to_string(result.label)},
                {"A_estimate", number(result.A_estimate)},
                {"A_stderr", number(result.A_stderr)},
                {"fit_residual", number(result.fit_residual)},
                {"model", result.model},
                {"model_exponent", number(result.model_exponent)},
                {"diagnostic", result.diagnostic}};
}

json to_json(const DeficitFit& fit) {
    return json{{"a_estimate", number(fit.a_estimate)},
                {"literal_estimate", number(fit.literal_estimate)},
                {"rms_residual", number(fit.rms_residual)},
                {"points", fit.points}};
}

json to_json(const JensenVerdict& verdict) {
    json grid = json::array();
    for (std::size_t i = 0; i < verdict.grid.size(); ++i) {
        grid.push_back(json{{"t", number(verdict.grid[i])}, {"margin", number(verdict.margin[i])}});
    }
    return json{{"status", to_string(verdict.status)},
                {"first_violation_t", verdict.first_violation_t ? number(*verdict.first_violation_t) : json(nullptr)},
                {"divergence_exponent", verdict.divergence_exponent ? number(*verdict.divergence_exponent) : json(nullptr)},
                {"tested_range", json::array({number(verdict.M), number(verdict.T_max)})},
                {"grid", grid}};
}

json to_json(const ExponentFit& fit) {
    json curve = json::array();
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        curve.push_back(json{{"R", number(fit.radii[i])}, {"D", number(fit.deficit[i])}});
    }
    return json{{"c", number(fit.c)},
                {"intercept", number(fit.intercept)},
                {"rms_residual", number(fit.rms_residual)},
                {"logarithmic", fit.logarithmic},
                {"uniqueness_evidence", fit.c <= 2.0},
                {"curve", curve}};
}

json to_json(const NormEstimate& estimate) {
    return json{{"log_norm_p", number(estimate.log_norm_p)},
                {"truncation_note", number(estimate.truncation_note)},
                {"warning", estimate.warning},
                {"message", estimate.message},
                {"log_sup_bound", number(estimate.log_sup_bound)},
                {"R_max", number(estimate.R_max)},
                {"radial_nodes", estimate.radial_nodes},
                {"angular_nodes", estimate.angular_nodes}};
}

json to_json(const ExperimentReport& report) {
    json aggregates = json::array();
    for (const auto& a : report.aggregates) {
        aggregates.push_back(json{{"k", a.k},
                                  {"radius", number(a.radius)},
                                  {"epsilon", number(a.epsilon)},
                                  {"expected_log_modulus", number(a.expected)},
                                  {"threshold", number(a.threshold)},
                                  {"grid_points", a.grid_points},
                                  {"violation_fraction", number(a.violation_fraction)},
                                  {"mean_sup", number(a.mean_sup)},
                                  {"mean_deviation", number(a.mean_deviation)},
                                  {"sd_deviation", number(a.sd_deviation)},
                                  {"predicted_bound", number(a.predicted_bound)}});
    }
    json trials = json::array();
    for (const auto& t : report.trials) {
        trials.push_back(json{{"trial", t.trial},
                              {"seed", t.seed},
                              {"k", t.k},
                              {"radius", number(t.radius)},
                              {"sup", number(t.sup)},
                              {"threshold", number(t.threshold)},
                              {"violated", t.violated},
                              {"deviation", number(t.deviation)},
                              {"tail_bound", number(t.tail_bound)}});
    }
    return json{{"experiment", report.experiment},
                {"fingerprint", report.fingerprint},
                {"seed", report.seed},
                {"seeds", report.seeds},
                {"warnings", report.warnings},
                {"notes", report.notes},
                {"aggregates", aggregates},
                {"trials", trials}};
}

void write_sequence_csv(std::ostream& out, const RadialSequence& seq, std::size_t count) {
    const auto values = seq.prefix(count);
    out << "n,lambda\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << i + 1 << ',' << format_number(values[i]) << '\n';
}

void write_configuration_csv(std::ostream& out, const PointConfiguration& cfg, std::size_t count) {
    const std::size_t realized = cfg.realize(count);
    out << "n,lambda,theta\n";
    for (std::size_t n = 1; n <= std::min(count, realized); ++n) {
        out << n << ',' << format_number(cfg.lambda(n)) << ',' << format_number(cfg.theta(n)) << '\n';
    }
}

void write_circle_csv(std::ostream& out, const std::vector<double>& theta, const std::vector<ProductValue>& values) {
    out << "theta,log_modulus,tail_bound\n";
    for (std::size_t i = 0; i < theta.size(); ++i) {
        out << format_number(theta[i]) << ',' << format_number(values[i].log_modulus) << ','
            << format_number(values[i].tail_bound) << '\n';
    }
}

void write_curve_csv(std::ostream& out, const ExperimentReport& report) {
    out << "trial,R,sup,threshold,violated\n";
    for (const auto& t : report.trials) {
        out << t.trial << ',' << format_number(t.radius) << ',' << format_number(t.sup) << ','
            << format_number(t.threshold) << ',' << (t.violated ? 1 : 0) << '\n';
    }
}

}  // namespace fockzero
