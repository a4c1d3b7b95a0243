#include "qgas/cli/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace qgas::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key \"" + key + "\" in " + section);
        }
    }
}

double require_number(const json& v, const std::string& name) {
    if (!v.is_number()) {
        throw ConfigError(name + " must be a number");
    }
    return v.get<double>();
}

int require_int(const json& v, const std::string& name) {
    if (!v.is_number_integer()) {
        throw ConfigError(name + " must be an integer");
    }
    return v.get<int>();
}

void parse_system(const json& section, RunConfig& cfg) {
    reject_unknown_keys(section, {"eps", "N", "q", "hbar"}, "system");
    if (section.contains("eps")) {
        const auto& arr = section.at("eps");
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError("system.eps must be a nonempty array");
        }
        cfg.eps.clear();
        for (const auto& v : arr) {
            cfg.eps.push_back(require_number(v, "system.eps[]"));
        }
    }
    if (section.contains("N")) {
        cfg.particles = require_int(section.at("N"), "system.N");
    }
    if (section.contains("q")) {
        cfg.q = require_number(section.at("q"), "system.q");
    }
    if (section.contains("hbar")) {
        cfg.hbar = require_number(section.at("hbar"), "system.hbar");
    }
}

void parse_zeros_poly(const json& section, RunConfig& cfg) {
    reject_unknown_keys(section, {"kinds"}, "zeros_poly");
    if (section.contains("kinds")) {
        const auto& arr = section.at("kinds");
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError("zeros_poly.kinds must be a nonempty array");
        }
        cfg.poly_fisher = false;
        cfg.poly_correlation = false;
        for (const auto& v : arr) {
            const std::string kind = v.is_string() ? v.get<std::string>() : "";
            if (kind == "fisher") {
                cfg.poly_fisher = true;
            } else if (kind == "correlation") {
                cfg.poly_correlation = true;
            } else {
                throw ConfigError(
                    "zeros_poly.kinds entries must be \"fisher\" or \"correlation\"");
            }
        }
    }
}

void parse_zeros_beta(const json& section, RunConfig& cfg) {
    reject_unknown_keys(section,
                        {"target", "beta_min", "beta_max", "beta1_min", "beta1_max",
                         "grid_m", "grid_k"},
                        "zeros_beta");
    if (section.contains("target")) {
        const std::string target =
            section.at("target").is_string() ? section.at("target").get<std::string>() : "";
        if (target == "partition") {
            cfg.beta_target = zeros::BetaTarget::partition;
        } else if (target == "zc") {
            cfg.beta_target = zeros::BetaTarget::zc;
        } else {
            throw ConfigError("zeros_beta.target must be \"partition\" or \"zc\"");
        }
    }
    const bool has_any = section.contains("beta_min") || section.contains("beta_max") ||
                         section.contains("beta1_min") || section.contains("beta1_max");
    if (has_any) {
        const bool has_all = section.contains("beta_min") && section.contains("beta_max") &&
                             section.contains("beta1_min") && section.contains("beta1_max");
        if (!has_all) {
            throw ConfigError(
                "zeros_beta region needs all of beta_min/beta_max/beta1_min/beta1_max");
        }
        zeros::Rect region{require_number(section.at("beta_min"), "zeros_beta.beta_min"),
                           require_number(section.at("beta_max"), "zeros_beta.beta_max"),
                           require_number(section.at("beta1_min"), "zeros_beta.beta1_min"),
                           require_number(section.at("beta1_max"), "zeros_beta.beta1_max")};
        cfg.region = region;
    }
    if (section.contains("grid_m")) {
        cfg.grid_m = require_int(section.at("grid_m"), "zeros_beta.grid_m");
    }
    if (section.contains("grid_k")) {
        cfg.grid_k = require_int(section.at("grid_k"), "zeros_beta.grid_k");
    }
}

void parse_correlator(const json& section, RunConfig& cfg) {
    reject_unknown_keys(section,
                        {"beta", "tau_min", "tau_max", "tau_points", "zero_threshold"},
                        "correlator");
    if (section.contains("beta")) {
        cfg.corr_beta = require_number(section.at("beta"), "correlator.beta");
    }
    if (section.contains("tau_min")) {
        cfg.tau_min = require_number(section.at("tau_min"), "correlator.tau_min");
    }
    if (section.contains("tau_max")) {
        cfg.tau_max = require_number(section.at("tau_max"), "correlator.tau_max");
    }
    if (section.contains("tau_points")) {
        cfg.tau_points = require_int(section.at("tau_points"), "correlator.tau_points");
    }
    if (section.contains("zero_threshold")) {
        cfg.zero_threshold =
            require_number(section.at("zero_threshold"), "correlator.zero_threshold");
    }
}

void parse_oracle(const json& section, RunConfig& cfg) {
    reject_unknown_keys(section, {"samples"}, "oracle");
    if (section.contains("samples")) {
        cfg.oracle_samples = require_int(section.at("samples"), "oracle.samples");
    }
}

} // namespace

SystemSpec RunConfig::system() const {
    try {
        return SystemSpec(eps, particles, DeformationParam(q), hbar);
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid system: ") + e.what());
    }
}

double RunConfig::eps_ratio() const {
    if (eps.size() != 2) {
        throw ConfigError("z-plane polynomials need a two-level system");
    }
    if (eps[0] == 0.0) {
        throw ConfigError("z-plane polynomials need eps1 != 0");
    }
    return eps[1] / eps[0];
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config root must be an object");
    }
    reject_unknown_keys(root, {"system", "zeros_poly", "zeros_beta", "correlator", "oracle"},
                        "config");
    if (root.contains("system")) {
        parse_system(root.at("system"), cfg);
    }
    if (root.contains("zeros_poly")) {
        parse_zeros_poly(root.at("zeros_poly"), cfg);
    }
    if (root.contains("zeros_beta")) {
        parse_zeros_beta(root.at("zeros_beta"), cfg);
    }
    if (root.contains("correlator")) {
        parse_correlator(root.at("correlator"), cfg);
    }
    if (root.contains("oracle")) {
        parse_oracle(root.at("oracle"), cfg);
    }
}

} // namespace qgas::cli
