#pragma once

#include "biphoton/setup.hpp"
#include "biphoton/states.hpp"

#include <complex>

namespace biphoton {

/// Transverse position in the fiber-tip plane (near field) or in the
/// Fourier plane of the lens (far field). Meters.
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Discretization of the Fourier integral used by the numeric oracle.
/// The domain is [center - half_extent, center + half_extent] per axis,
/// centered on each fiber mode.
struct QuadratureSpec {
    double half_extent = 0.0;
    int points_per_axis = 0;
};

/// Normalized Gaussian fiber mode, (1/(sqrt(2 pi) R)) exp(-|u|^2 / 4R^2).
/// The squared modulus integrates to 1 over the plane.
double gaussian_mode(PlanePoint u, double mode_radius);

/// Two-photon wavefunction at the fiber tips. Modes sit at x = -d/2
/// (mode a) and x = +d/2 (mode b); symmetric under u1 <-> u2.
std::complex<double> near_field(const TwoPhotonState& state, PlanePoint u1, PlanePoint u2,
                                const OpticalSetup& setup);

/// Far-field wavefunction via the closed-form Gaussian Fourier transform.
/// Each mode maps to a Gaussian envelope of size sigma carrying the phase
/// exp(+-i pi d x / (lambda f)); normalization is fixed by Parseval.
std::complex<double> far_field_analytic(const TwoPhotonState& state, PlanePoint r1,
                                        PlanePoint r2, const OpticalSetup& setup);

/// Far-field wavefunction by direct Simpson quadrature of the Fourier
/// integral, one 2D single-photon transform per mode. Independent oracle
/// for far_field_analytic. Throws NyquistViolation when the step is too
/// coarse for the requested coordinates.
std::complex<double> far_field_numeric(const TwoPhotonState& state, PlanePoint r1,
                                       PlanePoint r2, const OpticalSetup& setup,
                                       const QuadratureSpec& quad);

/// |far_field_analytic|^2, the coincidence rate density (m^-4).
double intensity(const TwoPhotonState& state, PlanePoint r1, PlanePoint r2,
                 const OpticalSetup& setup);

}  // namespace biphoton
