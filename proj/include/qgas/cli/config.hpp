#ifndef QGAS_CLI_CONFIG_HPP
#define QGAS_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgas/ensemble.hpp"
#include "qgas/zerofinder.hpp"

namespace qgas::cli {

/// Invalid configuration: bad file, unknown key, out-of-range value, or a
/// parameter combination a command cannot serve. Mapped to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Declarative run configuration; defaults match the figure1 preset
/// (hbar = 1, q = 2, eps = (1, 0)). A JSON config file and flag overrides are
/// layered on top.
struct RunConfig {
    // system
    std::vector<double> eps{1.0, 0.0};
    int particles = 5;
    double q = 2.0;
    double hbar = 1.0;

    // zeros-poly
    bool poly_fisher = true;
    bool poly_correlation = true;

    // zeros-beta
    zeros::BetaTarget beta_target = zeros::BetaTarget::partition;
    std::optional<zeros::Rect> region;
    int grid_m = 48;
    int grid_k = 48;

    // correlator sweep
    double corr_beta = 1.0;
    double tau_min = 0.0;
    double tau_max = 12.566370614359172; // two zero periods at q=2, deps=1
    int tau_points = 401;
    double zero_threshold = 1e-8;

    // oracle-check
    int oracle_samples = 5;
    bool oracle_corrupt = false;

    // common
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json
    bool svg = false;
    std::uint64_t seed = 0;
    int threads = 1;

    /// Validated SystemSpec from the system section.
    SystemSpec system() const;

    /// eps2/eps1 for the z-plane polynomial; requires a two-level system
    /// with eps1 != 0.
    double eps_ratio() const;
};

/// Parse a JSON config file into cfg. Unknown keys anywhere are rejected.
void apply_config_file(const std::string& path, RunConfig& cfg);

} // namespace qgas::cli

#endif
