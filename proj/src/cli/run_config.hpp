#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fockzero/canonical_product.hpp"
#include "fockzero/sequences.hpp"
#include "fockzero/serialization.hpp"
#include "fockzero/weight.hpp"

namespace fockzero::cli {

/// Everything needed to re-run a command. `params` holds the command-specific settings with
/// every default filled in, so two configs that run the same thing compare equal.
struct RunConfig {
    std::string command;     // generate, classify, eval-circle, experiment
    std::string experiment;  // concentration, jensen, exponent, norm (experiment only)
    FamilySpec family = ScaledSqrtFamily{};
    WeightProfile weight = WeightProfile::classical(1.0);
    GenusConvention genus = GenusConvention::floor_rho;
    TruncationPolicy truncation;
    std::optional<std::uint64_t> seed;
    json params = json::object();
    std::string out;  // primary output; empty means stdout
    std::string csv;  // secondary CSV output; empty means none

    bool operator==(const RunConfig& other) const;
};

json to_json(const RunConfig& config);
RunConfig run_config_from_json(const json& j);

/// Accepts a bare RunConfig or any emitted document that embeds one under "config".
RunConfig load_run_config(const std::string& path);

}  // namespace fockzero::cli
