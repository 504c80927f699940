#include "biphoton/optics.hpp"

#include "biphoton/errors.hpp"

#include <cmath>
#include <numbers>

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;

// 1D factor of the normalized 2D Gaussian mode: integral of the square is 1.
double mode_1d(double t, double radius) {
    return std::pow(2.0 * kPi, -0.25) / std::sqrt(radius) *
           std::exp(-t * t / (4.0 * radius * radius));
}

void check_state(const TwoPhotonState& state) {
    if (!is_normalized(state)) throw NotNormalized("two-photon state norm deviates from 1");
}

// Combines single-photon mode amplitudes into the bosonic two-photon sum.
std::complex<double> combine(const TwoPhotonState& state, std::complex<double> a1,
                             std::complex<double> b1, std::complex<double> a2,
                             std::complex<double> b2) {
    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    return state.amp20 * a1 * a2 + state.amp02 * b1 * b2 +
           state.amp11 * inv_sqrt2 * (a1 * b2 + b1 * a2);
}

// Composite Simpson of f over [lo, hi] with an even number of intervals.
template <typename F>
std::complex<double> simpson(F&& f, double lo, double hi, int nodes) {
    int intervals = nodes - 1;
    if (intervals % 2 != 0) ++intervals;
    const double h = (hi - lo) / intervals;
    std::complex<double> acc = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) {
        acc += f(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return acc * (h / 3.0);
}

// 1D Fourier transform of the mode centered at `center`, evaluated at the
// far-field coordinate t: integral of mode * exp(-i k t u) over the window
// around the center. Includes the 1/sqrt(lambda f) Parseval factor.
std::complex<double> mode_transform_1d(double t, double center, double radius, double k,
                                       double lambda_f, const QuadratureSpec& quad) {
    auto integrand = [&](double u) {
        return mode_1d(u - center, radius) * std::polar(1.0, -k * t * u);
    };
    const std::complex<double> raw =
        simpson(integrand, center - quad.half_extent, center + quad.half_extent,
                quad.points_per_axis);
    return raw / std::sqrt(lambda_f);
}

}  // namespace

double gaussian_mode(PlanePoint u, double mode_radius) {
    if (!(mode_radius > 0.0)) throw InvalidSetup("gaussian_mode: R must be positive");
    const double r2 = u.x * u.x + u.y * u.y;
    return std::exp(-r2 / (4.0 * mode_radius * mode_radius)) /
           (std::sqrt(2.0 * kPi) * mode_radius);
}

std::complex<double> near_field(const TwoPhotonState& state, PlanePoint u1, PlanePoint u2,
                                const OpticalSetup& setup) {
    check_state(state);
    const double half_d = setup.mode_separation / 2.0;
    auto mode_a = [&](PlanePoint u) {
        return gaussian_mode({u.x + half_d, u.y}, setup.mode_radius);
    };
    auto mode_b = [&](PlanePoint u) {
        return gaussian_mode({u.x - half_d, u.y}, setup.mode_radius);
    };
    return combine(state, mode_a(u1), mode_b(u1), mode_a(u2), mode_b(u2));
}

std::complex<double> far_field_analytic(const TwoPhotonState& state, PlanePoint r1,
                                        PlanePoint r2, const OpticalSetup& setup) {
    check_state(state);
    const auto derived = derive(setup);
    const double sigma = derived.sigma;
    const double phase_slope = kPi * setup.mode_separation /
                               (setup.wavelength * setup.focal_length);
    auto envelope = [&](PlanePoint r) {
        const double r2 = r.x * r.x + r.y * r.y;
        return std::exp(-r2 / (4.0 * sigma * sigma)) / (std::sqrt(2.0 * kPi) * sigma);
    };
    auto mode_a = [&](PlanePoint r) { return envelope(r) * std::polar(1.0, +phase_slope * r.x); };
    auto mode_b = [&](PlanePoint r) { return envelope(r) * std::polar(1.0, -phase_slope * r.x); };
    return combine(state, mode_a(r1), mode_b(r1), mode_a(r2), mode_b(r2));
}

std::complex<double> far_field_numeric(const TwoPhotonState& state, PlanePoint r1,
                                       PlanePoint r2, const OpticalSetup& setup,
                                       const QuadratureSpec& quad) {
    check_state(state);
    if (quad.points_per_axis < 64) {
        throw NyquistViolation("far_field_numeric: points_per_axis must be >= 64");
    }
    if (!(quad.half_extent > 0.0)) {
        throw NyquistViolation("far_field_numeric: half_extent must be positive");
    }
    const double lambda_f = setup.wavelength * setup.focal_length;
    const double k = 2.0 * kPi / lambda_f;
    const double coord_max =
        std::max({std::abs(r1.x), std::abs(r1.y), std::abs(r2.x), std::abs(r2.y)});
    const double step = 2.0 * quad.half_extent / quad.points_per_axis;
    if (k * coord_max * step >= kPi) {
        throw NyquistViolation("far_field_numeric: step under-resolves the Fourier kernel");
    }

    const double half_d = setup.mode_separation / 2.0;
    const double radius = setup.mode_radius;
    // Mode a sits at x = -d/2, mode b at x = +d/2; the y profile is shared.
    auto fx_a = [&](double x) { return mode_transform_1d(x, -half_d, radius, k, lambda_f, quad); };
    auto fx_b = [&](double x) { return mode_transform_1d(x, +half_d, radius, k, lambda_f, quad); };
    auto fy = [&](double y) { return mode_transform_1d(y, 0.0, radius, k, lambda_f, quad); };

    const std::complex<double> a1 = fx_a(r1.x) * fy(r1.y);
    const std::complex<double> b1 = fx_b(r1.x) * fy(r1.y);
    const std::complex<double> a2 = fx_a(r2.x) * fy(r2.y);
    const std::complex<double> b2 = fx_b(r2.x) * fy(r2.y);
    return combine(state, a1, b1, a2, b2);
}

double intensity(const TwoPhotonState& state, PlanePoint r1, PlanePoint r2,
                 const OpticalSetup& setup) {
    return std::norm(far_field_analytic(state, r1, r2, setup));
}

}  // namespace biphoton
