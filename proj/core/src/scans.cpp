#include "biphoton/scans.hpp"

#include "biphoton/detection.hpp"
#include "biphoton/random.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {

void check_spec(const ScanSpec& spec) {
    if (spec.points < 2) throw std::invalid_argument("scan: points must be >= 2");
    if (!(spec.stop > spec.start)) throw std::invalid_argument("scan: stop must exceed start");
}

double parameter_at(const ScanSpec& spec, int i) {
    return spec.start + (spec.stop - spec.start) * i / (spec.points - 1);
}

// Noiseless rate at one scan point; `theta` is the interferometer phase
// actually applied (it differs from spec.theta under dephasing).
double point_rate(const ScanSpec& spec, const OpticalSetup& setup, double parameter,
                  double theta) {
    switch (spec.kind) {
        case ScanKind::same_direction:
        case ScanKind::opposite_direction: {
            const auto state = prepare_from_hwp(spec.alpha, theta);
            const double s1 = parameter;
            const double s2 = (spec.kind == ScanKind::same_direction) ? parameter : -parameter;
            if (spec.slit_mode == SlitMode::narrow) return rate_narrow(state, s1, s2, setup);
            return rate_slit(state, SlitPair{s1, s2, setup.slit_width}, setup);
        }
        case ScanKind::phase: {
            const auto state = prepare_from_hwp(spec.alpha, theta);
            if (spec.slit_mode == SlitMode::narrow) return rate_narrow(state, 0.0, 0.0, setup);
            return rate_slit(state, SlitPair{0.0, 0.0, setup.slit_width}, setup);
        }
        case ScanKind::hwp: {
            const auto probs = occupation_probabilities(prepare_from_hwp(parameter, theta));
            // Theoretical-peak normalization: sin^2(4a) and cos^2(4a).
            return (spec.pairing == Pairing::same_output) ? 2.0 * probs.p20 : probs.p11;
        }
    }
    throw std::logic_error("unreachable scan kind");
}

// For phase scans the swept parameter *is* the phase.
double effective_theta(const ScanSpec& spec, double parameter) {
    return (spec.kind == ScanKind::phase) ? parameter : spec.theta;
}

void peak_normalize(ScanResult& result) {
    double peak = 0.0;
    for (const auto& s : result.samples) peak = std::max(peak, s.ideal_rate);
    if (peak <= 0.0) return;
    for (auto& s : result.samples) {
        s.ideal_rate /= peak;
        if (s.error) s.error = *s.error / peak;
    }
}

}  // namespace

ScanResult run_scan(const ScanSpec& spec, const OpticalSetup& setup) {
    check_spec(spec);
    ScanResult result;
    result.spec = spec;
    result.derived = derive(setup);
    result.samples.reserve(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        const double p = parameter_at(spec, i);
        result.samples.push_back({p, point_rate(spec, setup, p, effective_theta(spec, p)), {}, {}});
    }
    // HWP curves are already normalized to their theoretical peak.
    if (spec.kind != ScanKind::hwp) peak_normalize(result);
    return result;
}

ScanResult dephased_scan(const ScanSpec& spec, const OpticalSetup& setup, double sigma_theta,
                         int mc_samples, std::uint64_t seed) {
    check_spec(spec);
    if (sigma_theta < 0.0) throw std::invalid_argument("dephased_scan: sigma_theta must be >= 0");
    if (mc_samples < 1) throw std::invalid_argument("dephased_scan: mc_samples must be >= 1");
    if (sigma_theta == 0.0) return run_scan(spec, setup);

    ScanResult result;
    result.spec = spec;
    result.derived = derive(setup);
    result.samples.reserve(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        const double p = parameter_at(spec, i);
        const double theta0 = effective_theta(spec, p);
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int m = 0; m < mc_samples; ++m) {
            const double theta = theta0 + sigma_theta * normal_sample(rng);
            const double r = point_rate(spec, setup, p, theta);
            sum += r;
            sum_sq += r * r;
        }
        const double mean = sum / mc_samples;
        double se = 0.0;
        if (mc_samples > 1) {
            const double var = std::max(0.0, (sum_sq - sum * sum / mc_samples) / (mc_samples - 1));
            se = std::sqrt(var / mc_samples);
        }
        result.samples.push_back({p, mean, {}, se});
    }
    if (spec.kind != ScanKind::hwp) peak_normalize(result);
    return result;
}

}  // namespace biphoton
