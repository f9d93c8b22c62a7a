#include "cli/run_config.hpp"

#include <fstream>

#include "fockzero/error.hpp"

namespace fockzero::cli {

namespace {

const char* genus_name(GenusConvention genus) {
    return genus == GenusConvention::genus_one ? "genus_one" : "floor_rho";
}

}  // namespace

json to_json(const RunConfig& config) {
    return json{{"command", config.command},
                {"experiment", config.experiment},
                {"sequence", fockzero::to_json(config.family)},
                {"weight", fockzero::to_json(config.weight)},
                {"genus", genus_name(config.genus)},
                {"truncation", fockzero::to_json(config.truncation)},
                {"seed", config.seed ? json(*config.seed) : json(nullptr)},
                {"params", config.params},
                {"out", config.out},
                {"csv", config.csv}};
}

RunConfig run_config_from_json(const json& j) {
    require(j.is_object(), ErrorKind::validation, "run config must be a JSON object");
    RunConfig config;
    try {
        config.command = j.at("command").get<std::string>();
        config.experiment = j.value("experiment", std::string());
        config.family = family_from_json(j.at("sequence"));
        if (j.contains("weight")) config.weight = weight_from_json(j.at("weight"));
        const std::string genus = j.value("genus", std::string("floor_rho"));
        require(genus == "floor_rho" || genus == "genus_one", ErrorKind::validation, "unknown genus mode '" + genus + "'");
        config.genus = genus == "genus_one" ? GenusConvention::genus_one : GenusConvention::floor_rho;
        if (j.contains("truncation")) config.truncation = truncation_from_json(j.at("truncation"));
        if (j.contains("seed") && !j.at("seed").is_null()) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("params")) config.params = j.at("params");
        config.out = j.value("out", std::string());
        config.csv = j.value("csv", std::string());
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorKind::validation, std::string("malformed run config: ") + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::usage, "cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        fail(ErrorKind::validation, "config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("config")) return run_config_from_json(j.at("config"));
    return run_config_from_json(j);
}

bool RunConfig::operator==(const RunConfig& other) const { return to_json(*this) == to_json(other); }

}  // namespace fockzero::cli
