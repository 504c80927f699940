#include "biphoton/counting.hpp"

#include "biphoton/random.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {

// Sequential CDF inversion; valid while exp(-mean) stays representable.
long long poisson_invert(double mean, std::mt19937_64& rng) {
    const double u = uniform_open(rng);
    double pmf = std::exp(-mean);
    double cdf = pmf;
    long long k = 0;
    while (u > cdf) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        cdf += pmf;
        if (pmf == 0.0) break;  // exhausted double precision in the far tail
    }
    return k;
}

constexpr double kChunk = 256.0;       // exp(-256) ~ 1.5e-112, comfortably normal
constexpr double kNormalCutoff = 1e6;  // spec'd switch to the Gaussian limit

}  // namespace

double accidental_rate(double singles1, double singles2, double window) {
    if (singles1 < 0.0 || singles2 < 0.0 || window < 0.0) {
        throw std::invalid_argument("accidental_rate: inputs must be nonnegative");
    }
    return singles1 * singles2 * window;
}

long long poisson_sample(double mean, std::mt19937_64& rng) {
    if (mean < 0.0 || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson_sample: mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    if (mean > kNormalCutoff) {
        const double z = normal_sample(rng);
        const double v = std::round(mean + std::sqrt(mean) * z);
        return v < 0.0 ? 0 : static_cast<long long>(v);
    }
    long long total = 0;
    double remaining = mean;
    while (remaining > kChunk) {
        total += poisson_invert(kChunk, rng);
        remaining -= kChunk;
    }
    total += poisson_invert(remaining, rng);
    return total;
}

CountRecord sample_counts(double true_rate, double accidental_rate_cps,
                          double integration_time, std::uint64_t seed) {
    if (true_rate < 0.0 || accidental_rate_cps < 0.0) {
        throw std::invalid_argument("sample_counts: rates must be nonnegative");
    }
    if (!(integration_time > 0.0)) {
        throw std::invalid_argument("sample_counts: integration_time must be positive");
    }
    std::mt19937_64 rng(splitmix64(seed));
    CountRecord rec;
    rec.true_rate = true_rate;
    rec.accidental_rate = accidental_rate_cps;
    rec.integration_time = integration_time;
    rec.counts = poisson_sample((true_rate + accidental_rate_cps) * integration_time, rng);
    rec.corrected = static_cast<double>(rec.counts) - accidental_rate_cps * integration_time;
    rec.count_error = std::sqrt(static_cast<double>(rec.counts));
    return rec;
}

}  // namespace biphoton
