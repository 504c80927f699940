#pragma once

#include <cstdint>
#include <random>

namespace biphoton {

/// One simulated counting interval at a detector-position pair.
struct CountRecord {
    double true_rate = 0.0;        // coincidences / s
    double accidental_rate = 0.0;  // coincidences / s
    double integration_time = 0.0; // s
    long long counts = 0;          // sampled total counts
    double corrected = 0.0;        // counts minus expected accidentals
    double count_error = 0.0;      // sqrt(counts)
};

/// Uncorrelated-coincidence background: singles1 * singles2 * window.
double accidental_rate(double singles1, double singles2, double window);

/// Poisson sample with the given mean. Exact inversion below mean 1e6
/// (chunked so the pmf never underflows), normal approximation above.
long long poisson_sample(double mean, std::mt19937_64& rng);

/// Draws counts from Poisson((true + accidental) * time) and applies the
/// accidental subtraction. Deterministic for a fixed seed.
CountRecord sample_counts(double true_rate, double accidental_rate_cps,
                          double integration_time, std::uint64_t seed);

}  // namespace biphoton
