#pragma once

#include "biphoton/scans.hpp"
#include "biphoton/setup.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace biphoton {

/// Parameters for attaching simulated counting records to a scan.
struct CountingConfig {
    double peak_rate_cps = 0.0;       // coincidence rate at the scan peak
    double integration_time_s = 0.0;  // per point
    double singles1_cps = 0.0;        // singles rates feeding the accidental model
    double singles2_cps = 0.0;
};

struct DephasingConfig {
    double sigma_theta_rad = 0.0;
    int mc_samples = 1;
};

/// 2D coincidence map over dimensionless xi = x / Lambda.
struct MapConfig {
    double extent_xi = 1.0;
    int points = 0;
    double theta = 0.0;
    double alpha = 0.0;
};

/// Full run description: what the CLI reads from --config and what every
/// output embeds as its manifest. Angles appear in the JSON in degrees,
/// spatial scan bounds in mm; internally everything is SI.
struct RunConfig {
    OpticalSetup setup;
    std::optional<ScanSpec> scan;
    std::optional<MapConfig> map;
    std::optional<CountingConfig> counting;
    std::optional<DephasingConfig> dephasing;
    std::uint64_t seed = 1;
};

/// Strict parse: unknown keys are errors. The manifest keys "command" and
/// "derived" are accepted and ignored so a manifest can be re-run as a
/// config. Throws InvalidSetup for setup problems and
/// std::runtime_error for other config errors.
RunConfig config_from_json_text(const std::string& text);

/// Serializes the config as a manifest: the config itself plus the
/// command name and the derived Lambda/sigma. Key order is deterministic.
std::string manifest_json_text(const RunConfig& config, const std::string& command);

}  // namespace biphoton
