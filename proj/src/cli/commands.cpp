#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "fockzero/diagnostics.hpp"
#include "fockzero/error.hpp"
#include "fockzero/parallel.hpp"

namespace fockzero::cli {

namespace {

struct Flags {
    std::string family = "scaled-sqrt";
    double alpha = 0.0;
    double a = 1.0;
    double b = 2.0;
    std::string values;
    std::size_t origin = 0;

    std::string weight = "classical";
    double weight_alpha = 1.0;
    double rho = 2.0;
    double c = 0.0;
    std::string genus = "auto";

    std::string policy = "radius-multiple";
    std::size_t K = 0;
    double m = 2.0;
    double epsilon = 1e-9;
    std::size_t max_terms = std::size_t{1} << 18;

    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
    std::string spec;

    // generate
    std::size_t count = 0;
    double tmax = 0.0;
    bool angles = false;
    // classify
    double t_min = 20.0;
    double t_max = 500.0;
    std::size_t samples = 200;
    std::string spacing = "geometric";
    double tau = 0.05;
    // eval-circle
    double radius = 1.0;
    std::size_t points = 64;
    std::size_t correction_terms = std::size_t{1} << 16;
    // concentration
    std::vector<double> radii{20.0, 40.0, 60.0};
    std::size_t trials = 300;
    std::string threshold = "star";
    std::size_t grid_points = 0;
    std::size_t refine_iters = 24;
    double beta = 0.0;
    // jensen
    double p = 2.0;
    double gamma = 0.5;
    double M = 2.0;
    std::size_t jensen_grid = 1000;
    // exponent
    double rmin = 10.0;
    double rmax = 200.0;
    std::size_t radius_count = 64;
    // norm
    std::size_t radial_nodes = 1024;
    std::size_t angular_nodes = 256;
};

std::string normalise(std::string name) {
    for (char& ch : name) {
        if (ch == '_') ch = '-';
    }
    return name;
}

void add_sequence_options(CLI::App* app, Flags& f) {
    app->add_option("--family", f.family, "sqrt-shift, scaled-sqrt, gauss-lattice, critical or explicit");
    app->add_option("--alpha", f.alpha, "shift of sqrt-shift");
    app->add_option("--a", f.a, "scale of scaled-sqrt / gauss-lattice, deficit constant of critical");
    app->add_option("--b", f.b, "log power of critical");
    app->add_option("--values", f.values, "comma-separated moduli for the explicit family");
    app->add_option("--origin", f.origin, "origin multiplicity for the explicit family");
}

void add_weight_options(CLI::App* app, Flags& f) {
    app->add_option("--weight", f.weight, "classical, power or log-perturbed");
    app->add_option("--weight-alpha", f.weight_alpha, "alpha of the classical weight");
    app->add_option("--rho", f.rho, "order of the power / log-perturbed weight");
    app->add_option("--c", f.c, "log exponent of the log-perturbed weight");
}

void add_product_options(CLI::App* app, Flags& f) {
    app->add_option("--genus", f.genus, "auto, floor-rho or genus-one");
    app->add_option("--policy", f.policy, "fixed, radius-multiple or error-target");
    app->add_option("--K", f.K, "terms for the fixed policy");
    app->add_option("--m", f.m, "multiple for the radius-multiple policy");
    app->add_option("--epsilon", f.epsilon, "target for the error-target policy");
    app->add_option("--max-terms", f.max_terms, "hard cap on the number of factors");
    app->add_option("--correction-terms", f.correction_terms, "terms in the power sum of the integer-order correction");
}

void add_output_options(CLI::App* app, Flags& f, bool with_seed) {
    if (with_seed) app->add_option("--seed", f.seed, "random seed; generated and recorded if absent");
    app->add_option("--out", f.out, "primary output file (stdout if absent)");
    app->add_option("--csv", f.csv, "CSV output file");
    app->add_option("--spec", f.spec, "where to write the run config JSON");
}

FamilySpec family_from_flags(const Flags& f) {
    const std::string name = normalise(f.family);
    if (name == "sqrt-shift") return SqrtShiftFamily{f.alpha};
    if (name == "scaled-sqrt") return ScaledSqrtFamily{f.a};
    if (name == "gauss-lattice") return GaussLatticeFamily{f.a};
    if (name == "critical") return CriticalFamily{f.a, f.b};
    if (name == "explicit") {
        ExplicitFamily explicit_family;
        std::stringstream stream(f.values);
        std::string item;
        while (std::getline(stream, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            try {
                explicit_family.values.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(ErrorKind::usage, "cannot parse explicit modulus '" + item + "'");
            }
        }
        explicit_family.origin_multiplicity = f.origin;
        return explicit_family;
    }
    fail(ErrorKind::usage, "unknown family '" + f.family + "'");
}

WeightProfile weight_from_flags(const Flags& f) {
    const std::string name = normalise(f.weight);
    if (name == "classical") return WeightProfile::classical(f.weight_alpha);
    if (name == "power") return WeightProfile::power(f.rho);
    if (name == "log-perturbed") return WeightProfile::log_perturbed(f.rho, f.c);
    fail(ErrorKind::usage, "unknown weight '" + f.weight + "'");
}

TruncationPolicy truncation_from_flags(const Flags& f) {
    TruncationPolicy policy;
    const std::string name = normalise(f.policy);
    if (name == "fixed") {
        policy.mode = FixedTerms{f.K};
    } else if (name == "radius-multiple") {
        policy.mode = RadiusMultiple{f.m};
    } else if (name == "error-target") {
        policy.mode = ErrorTarget{f.epsilon};
    } else {
        fail(ErrorKind::usage, "unknown truncation policy '" + f.policy + "'");
    }
    policy.max_terms = f.max_terms;
    policy.validate();
    return policy;
}

GenusConvention genus_from_flags(const Flags& f, bool concentration) {
    const std::string name = normalise(f.genus);
    if (name == "auto") return concentration ? GenusConvention::genus_one : GenusConvention::floor_rho;
    if (name == "floor-rho") return GenusConvention::floor_rho;
    if (name == "genus-one") return GenusConvention::genus_one;
    fail(ErrorKind::usage, "unknown genus mode '" + f.genus + "'");
}

std::uint64_t fresh_seed() {
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

std::string default_spec_path(const std::string& out) {
    if (out.empty()) return {};
    const auto dot = out.find_last_of('.');
    const auto slash = out.find_last_of('/');
    const std::string stem = dot != std::string::npos && (slash == std::string::npos || dot > slash) ? out.substr(0, dot) : out;
    return stem + ".json";
}

RunConfig config_from_flags(const std::string& command, const std::string& experiment, const Flags& f,
                            const CLI::App& leaf) {
    auto given = [&](const char* name) { return leaf.count(name) > 0; };
    RunConfig config;
    config.command = command;
    config.experiment = experiment;
    config.family = family_from_flags(f);
    config.weight = weight_from_flags(f);
    config.genus = genus_from_flags(f, experiment == "concentration");
    config.truncation = truncation_from_flags(f);
    config.out = f.out;
    config.csv = f.csv;

    json& params = config.params;
    bool randomized = false;
    if (command == "generate") {
        require(given("--count") + given("--tmax") == 1, ErrorKind::usage, "generate needs exactly one of --count or --tmax");
        params["count"] = given("--count") ? json(f.count) : json(nullptr);
        params["tmax"] = given("--tmax") ? number(f.tmax) : json(nullptr);
        params["angles"] = f.angles;
        randomized = f.angles;
    } else if (command == "classify") {
        params["t_min"] = number(f.t_min);
        params["t_max"] = number(f.t_max);
        params["samples"] = f.samples;
        params["spacing"] = f.spacing;
        params["tau"] = number(f.tau);
    } else if (command == "eval-circle") {
        params["radius"] = number(f.radius);
        params["points"] = f.points;
        params["correction_terms"] = f.correction_terms;
        randomized = true;
    } else if (experiment == "concentration") {
        double a = f.a, b = f.b;
        require(std::holds_alternative<CriticalFamily>(config.family) || (given("--a") && given("--b")),
                ErrorKind::usage, "concentration on a non-critical family needs --a and --b for the threshold");
        json radii = json::array();
        for (double r : f.radii) radii.push_back(number(r));
        params["radii"] = radii;
        params["trials"] = f.trials;
        params["a"] = number(a);
        params["b"] = number(b);
        params["threshold"] = f.threshold == "envelope" || f.threshold == "upper-envelope" ? "upper_envelope" : f.threshold;
        params["grid_points"] = given("--grid-points") ? json(f.grid_points) : json(nullptr);
        params["refine_iters"] = f.refine_iters;
        params["beta"] = number(f.beta);
        params["correction_terms"] = f.correction_terms;
        randomized = true;
    } else if (experiment == "jensen") {
        params["p"] = number(f.p);
        params["gamma"] = number(f.gamma);
        params["M"] = number(f.M);
        params["T_max"] = number(f.t_max);
        params["grid_points"] = f.jensen_grid;
    } else if (experiment == "exponent") {
        params["r_min"] = number(f.rmin);
        params["r_max"] = number(f.rmax);
        params["count"] = f.radius_count;
    } else if (experiment == "norm") {
        params["p"] = number(f.p);
        params["r_max"] = given("--rmax") ? number(f.rmax) : json(nullptr);
        params["radial_nodes"] = f.radial_nodes;
        params["angular_nodes"] = f.angular_nodes;
        params["correction_terms"] = f.correction_terms;
        randomized = true;
    }
    if (randomized) config.seed = given("--seed") ? f.seed : fresh_seed();
    return config;
}

// ---------------------------------------------------------------------------

double real_param(const json& params, const char* key) { return number_from(params.at(key)); }

std::size_t size_param(const json& params, const char* key) { return params.at(key).get<std::size_t>(); }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    require(static_cast<bool>(file), ErrorKind::validation, "cannot write '" + path + "'");
    file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t require_seed(const RunConfig& config) {
    require(config.seed.has_value(), ErrorKind::validation, "this command needs a seed");
    return *config.seed;
}

GenusSpec genus_with_sum(const RunConfig& config, const PointConfiguration& cfg, std::size_t terms) {
    GenusSpec genus = genus_for(config.weight, config.genus);
    if (genus.correction) {
        std::size_t K = terms;
        if (const auto size = cfg.sequence().finite_size()) K = std::min(K, *size);
        genus = with_power_sum(genus, tail_sum(cfg, genus.correction->rho, K));
    }
    return genus;
}

void run_generate(const RunConfig& config, std::ostream& out) {
    const RadialSequence seq = make_sequence(config.family);
    const json& params = config.params;
    std::size_t count = 0;
    if (!params.at("count").is_null()) {
        count = size_param(params, "count");
        if (const auto size = seq.finite_size()) count = std::min(count, *size);
    } else {
        const double tmax = real_param(params, "tmax");
        require(tmax > 0.0, ErrorKind::domain, "--tmax must be positive");
        count = seq.realize_radius(tmax);
    }
    std::ostringstream csv;
    if (params.at("angles").get<bool>()) {
        write_configuration_csv(csv, randomize(seq, require_seed(config)), count);
    } else {
        write_sequence_csv(csv, seq, count);
    }
    write_text(config.out, csv.str(), out);
}

void run_classify(const RunConfig& config, std::ostream& out) {
    const RadialSequence seq = make_sequence(config.family);
    const json& params = config.params;
    CountingWindow window;
    window.t_min = real_param(params, "t_min");
    window.t_max = real_param(params, "t_max");
    window.samples = size_param(params, "samples");
    const std::string spacing = params.at("spacing").get<std::string>();
    require(spacing == "linear" || spacing == "geometric", ErrorKind::usage, "unknown spacing '" + spacing + "'");
    window.spacing = spacing == "linear" ? Spacing::linear : Spacing::geometric;
    ClassifyOptions options;
    options.tau = real_param(params, "tau");

    json doc{{"config", to_json(config)}};
    doc["result"] = to_json(classify_density(seq, config.weight, window, options));
    if (const auto* critical = std::get_if<CriticalFamily>(&config.family)) {
        try {
            doc["deficit"] = to_json(critical_deficit_fit(seq, critical->b, window));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::fit) throw;
            doc["deficit"] = json{{"error", e.what()}};
        }
    }
    write_text(config.out, dump(doc), out);
}

void run_eval_circle(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const RadialSequence seq = make_sequence(config.family);
    const PointConfiguration cfg = randomize(seq, require_seed(config));
    const double R = real_param(config.params, "radius");
    const std::size_t N = size_param(config.params, "points");
    require(R > 0.0, ErrorKind::domain, "--radius must be positive");
    require(N >= 1, ErrorKind::domain, "--points must be positive");
    const GenusSpec genus = genus_with_sum(config, cfg, size_param(config.params, "correction_terms"));

    std::vector<double> theta(N);
    std::vector<ProductValue> values(N);
    for (std::size_t i = 0; i < N; ++i) theta[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(N);
    parallel_for(N, [&](std::size_t i) { values[i] = log_product(cfg, std::polar(R, theta[i]), genus, config.truncation); });
    for (std::size_t i = 0; i < N; ++i) {
        if (values[i].is_exact_zero) {
            err << "warning: point " << i << " (theta = " << format_number(theta[i]) << ") lands on a zero\n";
        }
    }
    std::ostringstream csv;
    write_circle_csv(csv, theta, values);
    write_text(config.out, csv.str(), out);
}

void run_concentration(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const RadialSequence seq = make_sequence(config.family);
    json options_json = config.params;
    options_json["seed"] = require_seed(config);
    ConcentrationOptions options = concentration_options_from_json(options_json);
    GenusSpec genus = genus_for(config.weight, config.genus);
    require(!genus.correction, ErrorKind::domain,
            "the concentration experiment draws a fresh configuration per trial; use --genus genus-one");
    const ExperimentReport report = concentration_experiment(seq, genus, options);
    for (const auto& warning : report.warnings) err << "warning: " << warning << '\n';
    json doc{{"config", to_json(config)}, {"report", to_json(report)}};
    write_text(config.out, dump(doc), out);
    if (!config.csv.empty()) {
        std::ostringstream csv;
        write_curve_csv(csv, report);
        write_text(config.csv, csv.str(), out);
    }
}

void run_jensen(const RunConfig& config, std::ostream& out) {
    const RadialSequence seq = make_sequence(config.family);
    const json& params = config.params;
    const JensenVerdict verdict =
        jensen_certificate(seq, config.weight, real_param(params, "p"), PowerDecay{real_param(params, "gamma")},
                           real_param(params, "M"), real_param(params, "T_max"), size_param(params, "grid_points"));
    json doc{{"config", to_json(config)}, {"verdict", to_json(verdict)}};
    write_text(config.out, dump(doc), out);
}

void run_exponent(const RunConfig& config, std::ostream& out) {
    const RadialSequence seq = make_sequence(config.family);
    const json& params = config.params;
    const ExponentFit fit = uniqueness_exponent_details(
        seq, RadiusGrid{real_param(params, "r_min"), real_param(params, "r_max"), size_param(params, "count")});
    json doc{{"config", to_json(config)}, {"fit", to_json(fit)}};
    write_text(config.out, dump(doc), out);
    if (!config.csv.empty()) {
        std::ostringstream csv;
        csv << "R,D\n";
        for (std::size_t i = 0; i < fit.radii.size(); ++i) {
            csv << format_number(fit.radii[i]) << ',' << format_number(fit.deficit[i]) << '\n';
        }
        write_text(config.csv, csv.str(), out);
    }
}

void run_norm(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const RadialSequence seq = make_sequence(config.family);
    const PointConfiguration cfg = randomize(seq, require_seed(config));
    const json& params = config.params;
    const double p = real_param(params, "p");
    const double r_max = params.at("r_max").is_null() ? suggest_norm_radius(seq, config.weight, p)
                                                       : real_param(params, "r_max");
    const GenusSpec genus = genus_with_sum(config, cfg, size_param(params, "correction_terms"));
    const NormEstimate estimate = fock_norm_estimate(cfg, genus, config.weight, p, r_max, size_param(params, "radial_nodes"),
                                                     size_param(params, "angular_nodes"));
    if (estimate.warning) err << "warning: " << estimate.message << '\n';
    json doc{{"config", to_json(config)}, {"estimate", to_json(estimate)}};
    write_text(config.out, dump(doc), out);
}

void report_error(std::ostream& err, ErrorKind kind, const std::string& message) {
    const json doc{{"error", {{"kind", to_string(kind)}, {"message", message}, {"exit_code", exit_code(kind)}}}};
    err << doc.dump() << '\n';
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::usage: return 1;
        case ErrorKind::domain:
        case ErrorKind::validation:
        case ErrorKind::hypothesis: return 2;
        case ErrorKind::fit:
        case ErrorKind::truncation:
        case ErrorKind::numerical: return 3;
    }
    return 3;
}

void execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.command == "generate") return run_generate(config, out);
    if (config.command == "classify") return run_classify(config, out);
    if (config.command == "eval-circle") return run_eval_circle(config, out, err);
    if (config.command == "experiment") {
        if (config.experiment == "concentration") return run_concentration(config, out, err);
        if (config.experiment == "jensen") return run_jensen(config, out);
        if (config.experiment == "exponent") return run_exponent(config, out);
        if (config.experiment == "norm") return run_norm(config, out, err);
        fail(ErrorKind::usage, "unknown experiment '" + config.experiment + "'");
    }
    fail(ErrorKind::usage, "unknown command '" + config.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random zero sets and canonical products in Fock-type spaces"};
    app.require_subcommand(1);
    Flags f;
    std::string config_path;

    auto* generate = app.add_subcommand("generate", "write a radial sequence (and optionally angles) as CSV");
    add_sequence_options(generate, f);
    add_output_options(generate, f, true);
    generate->add_option("--count", f.count, "number of moduli");
    generate->add_option("--tmax", f.tmax, "every modulus below this radius");
    generate->add_flag("--angles", f.angles, "randomize and add the theta column");

    auto* classify = app.add_subcommand("classify", "classify the density of a sequence against a weight");
    add_sequence_options(classify, f);
    add_weight_options(classify, f);
    add_output_options(classify, f, false);
    classify->add_option("--tmin", f.t_min, "window start");
    classify->add_option("--tmax", f.t_max, "window end");
    classify->add_option("--samples", f.samples, "window samples");
    classify->add_option("--spacing", f.spacing, "linear or geometric");
    classify->add_option("--tau", f.tau, "tolerance around density 1");

    auto* eval = app.add_subcommand("eval-circle", "evaluate log|W| on a circle");
    add_sequence_options(eval, f);
    add_weight_options(eval, f);
    add_product_options(eval, f);
    add_output_options(eval, f, true);
    eval->add_option("--radius", f.radius, "circle radius")->required();
    eval->add_option("--points", f.points, "number of equidistant angles");

    auto* experiment = app.add_subcommand("experiment", "run an experiment and write a JSON report");
    experiment->require_subcommand(1);
    auto* concentration = experiment->add_subcommand("concentration", "circle-supremum concentration");
    auto* jensen = experiment->add_subcommand("jensen", "Jensen-type uniqueness certificate");
    auto* exponent = experiment->add_subcommand("exponent", "uniqueness exponent fit");
    auto* norm = experiment->add_subcommand("norm", "Fock norm quadrature");
    for (auto* sub : {concentration, jensen, exponent, norm}) {
        add_sequence_options(sub, f);
        add_weight_options(sub, f);
        add_output_options(sub, f, sub == concentration || sub == norm);
    }
    add_product_options(concentration, f);
    concentration->add_option("--radii", f.radii, "target radii (nudged to safe radii)")->delimiter(',');
    concentration->add_option("--trials", f.trials, "number of trials");
    concentration->add_option("--threshold", f.threshold, "star or envelope");
    concentration->add_option("--grid-points", f.grid_points, "fixed circle grid size");
    concentration->add_option("--refine-iters", f.refine_iters, "golden-section iterations");
    concentration->add_option("--beta", f.beta, "angle of the centred deviation");
    jensen->add_option("--p", f.p, "exponent p");
    jensen->add_option("--gamma", f.gamma, "decay exponent of g(t) = t^-gamma");
    jensen->add_option("--M", f.M, "range start");
    jensen->add_option("--tmax", f.t_max, "range end");
    jensen->add_option("--grid-points", f.jensen_grid, "geometric grid size");
    exponent->add_option("--rmin", f.rmin, "smallest radius");
    exponent->add_option("--rmax", f.rmax, "largest radius");
    exponent->add_option("--count", f.radius_count, "number of radii");
    add_product_options(norm, f);
    norm->add_option("--p", f.p, "exponent p");
    norm->add_option("--rmax", f.rmax, "outer radius (suggested if absent)");
    norm->add_option("--radial", f.radial_nodes, "radial nodes");
    norm->add_option("--angular", f.angular_nodes, "angular nodes");

    auto* rerun = app.add_subcommand("run", "re-execute a saved run config or report");
    rerun->add_option("--config", config_path, "run config JSON")->required();
    rerun->add_option("--out", f.out, "override the primary output");
    rerun->add_option("--csv", f.csv, "override the CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, ErrorKind::usage, e.what());
        return 1;
    }

    try {
        RunConfig config;
        if (rerun->parsed()) {
            config = load_run_config(config_path);
            if (rerun->count("--out")) config.out = f.out;
            if (rerun->count("--csv")) config.csv = f.csv;
        } else {
            std::string command, name;
            const CLI::App* leaf = nullptr;
            for (auto* sub : {generate, classify, eval}) {
                if (sub->parsed()) {
                    command = sub->get_name();
                    leaf = sub;
                }
            }
            if (experiment->parsed()) {
                command = "experiment";
                for (auto* sub : {concentration, jensen, exponent, norm}) {
                    if (sub->parsed()) {
                        name = sub->get_name();
                        leaf = sub;
                    }
                }
            }
            config = config_from_flags(command, name, f, *leaf);
            if (config.seed && leaf->count("--seed") == 0) {
                err << "note: no seed given; using generated seed " << *config.seed << " (recorded in the config)\n";
            }
            std::string spec = f.spec;
            if (spec.empty() && (command == "generate" || command == "eval-circle")) spec = default_spec_path(f.out);
            if (!spec.empty()) write_text(spec, dump(to_json(config)), out);
        }
        execute(config, out, err);
    } catch (const TruncationError& e) {
        const json doc{{"error",
                        {{"kind", to_string(e.kind())},
                         {"message", e.what()},
                         {"exit_code", exit_code(e.kind())},
                         {"achieved_bound", number(e.achieved_bound())},
                         {"terms", e.terms()}}}};
        err << doc.dump() << '\n';
        return exit_code(e.kind());
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error(err, ErrorKind::numerical, e.what());
        return exit_code(ErrorKind::numerical);
    }
    return 0;
}

}  // namespace fockzero::cli
