#pragma once

#include "biphoton/setup.hpp"
#include "biphoton/states.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace biphoton {

enum class ScanKind { same_direction, opposite_direction, phase, hwp };
enum class SlitMode { narrow, finite };

/// One of the four measurement protocols. Spatial scans sweep the common
/// detector displacement s (same_direction: s1 = s2 = s,
/// opposite_direction: s1 = -s2 = s) in meters; phase and hwp scans sweep
/// the angle in radians. theta and alpha fix the prepared state for the
/// non-swept parameters.
struct ScanSpec {
    ScanKind kind = ScanKind::same_direction;
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    double theta = 0.0;
    double alpha = 0.0;
    SlitMode slit_mode = SlitMode::narrow;
    Pairing pairing = Pairing::same_output;  // hwp scans only
};

struct ScanSample {
    double parameter = 0.0;
    double ideal_rate = 0.0;
    std::optional<double> counts;
    std::optional<double> error;  // sqrt(counts), or the MC standard error
};

struct ScanResult {
    ScanSpec spec;
    std::vector<ScanSample> samples;
    DerivedQuantities derived;
};

/// Evaluates the noiseless protocol. Rates are peak-normalized over the
/// scan (max sample = 1).
ScanResult run_scan(const ScanSpec& spec, const OpticalSetup& setup);

/// Same protocol with the interferometer phase jittered per MC draw:
/// theta' ~ Normal(theta, sigma_theta), averaged over mc_samples draws.
/// NOON fringe visibility degrades by exp(-2 sigma_theta^2).
/// Bit-reproducible for fixed (seed, mc_samples); each point uses an
/// independently derived seed.
ScanResult dephased_scan(const ScanSpec& spec, const OpticalSetup& setup,
                         double sigma_theta, int mc_samples, std::uint64_t seed);

}  // namespace biphoton
