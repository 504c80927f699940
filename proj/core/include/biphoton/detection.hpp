#pragma once

#include "biphoton/setup.hpp"
#include "biphoton/states.hpp"

namespace biphoton {

/// Detector slits centered at x = s1 and x = s2, both of width `width`.
struct SlitPair {
    double s1 = 0.0;
    double s2 = 0.0;
    double width = 0.0;
};

/// Narrow-slit coincidence rate: the far-field intensity at x1 = s1,
/// x2 = s2 marginalized over both y coordinates in closed form.
/// Probability density in the two x coordinates (m^-2).
double rate_narrow(const TwoPhotonState& state, double s1, double s2,
                   const OpticalSetup& setup);

/// Finite-slit coincidence rate: Simpson quadrature of the y-marginalized
/// intensity over [s1 - a/2, s1 + a/2] x [s2 - a/2, s2 + a/2].
/// Converges to width^2 * rate_narrow as the width shrinks.
double rate_slit(const TwoPhotonState& state, const SlitPair& slits,
                 const OpticalSetup& setup, int quad_points = 64);

/// Rate of a single two-photon pixel at the origin (both detectors at
/// r = 0) after applying an extra interferometer phase theta to the
/// state. NOON states follow 1 + cos(2 theta); the separable state is
/// phase-invariant.
double single_pixel_rate(const TwoPhotonState& state, double theta,
                         const OpticalSetup& setup);

}  // namespace biphoton
