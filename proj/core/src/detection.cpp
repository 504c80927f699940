#include "biphoton/detection.hpp"

#include "biphoton/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;

// x-axis amplitude of the far field after the y marginalization. The y
// profile is shared by every mode and integrates out to a factor of 1,
// so |amplitude_x|^2 is the y-marginalized intensity directly.
std::complex<double> amplitude_x(const TwoPhotonState& state, double x1, double x2,
                                 const OpticalSetup& setup) {
    if (!is_normalized(state)) throw NotNormalized("two-photon state norm deviates from 1");
    const auto derived = derive(setup);
    const double sigma = derived.sigma;
    const double phase_slope =
        kPi * setup.mode_separation / (setup.wavelength * setup.focal_length);
    auto envelope = [&](double x) {
        return std::pow(2.0 * kPi, -0.25) / std::sqrt(sigma) *
               std::exp(-x * x / (4.0 * sigma * sigma));
    };
    auto mode_a = [&](double x) { return envelope(x) * std::polar(1.0, +phase_slope * x); };
    auto mode_b = [&](double x) { return envelope(x) * std::polar(1.0, -phase_slope * x); };
    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    return state.amp20 * mode_a(x1) * mode_a(x2) + state.amp02 * mode_b(x1) * mode_b(x2) +
           state.amp11 * inv_sqrt2 * (mode_a(x1) * mode_b(x2) + mode_b(x1) * mode_a(x2));
}

}  // namespace

double rate_narrow(const TwoPhotonState& state, double s1, double s2,
                   const OpticalSetup& setup) {
    return std::norm(amplitude_x(state, s1, s2, setup));
}

double rate_slit(const TwoPhotonState& state, const SlitPair& slits,
                 const OpticalSetup& setup, int quad_points) {
    if (!(slits.width > 0.0)) throw std::invalid_argument("rate_slit: slit width must be > 0");
    if (quad_points < 16) throw std::invalid_argument("rate_slit: quad_points must be >= 16");
    int intervals = quad_points;
    if (intervals % 2 != 0) ++intervals;

    const double half = slits.width / 2.0;
    auto weight = [&](int i) { return (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
    const double h1 = slits.width / intervals;
    double acc = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const double x1 = slits.s1 - half + i * h1;
        double row = 0.0;
        for (int j = 0; j <= intervals; ++j) {
            const double x2 = slits.s2 - half + j * h1;
            row += weight(j) * rate_narrow(state, x1, x2, setup);
        }
        acc += weight(i) * row;
    }
    return acc * (h1 / 3.0) * (h1 / 3.0);
}

double single_pixel_rate(const TwoPhotonState& state, double theta,
                         const OpticalSetup& setup) {
    return rate_narrow(with_phase(state, theta), 0.0, 0.0, setup);
}

}  // namespace biphoton
