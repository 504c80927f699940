#pragma once

#include <string>
#include <vector>

namespace biphoton {

/// Physical configuration of the fiber double-slit interferometer.
/// All lengths in meters, times in seconds. Symbols follow the usual
/// convention: d = fiber pitch, R = Gaussian mode radius, a = detector
/// slit width, tau = coincidence window.
struct OpticalSetup {
    double wavelength = 0.0;
    double focal_length = 0.0;
    double mode_separation = 0.0;
    double mode_radius = 0.0;
    double slit_width = 0.0;
    double coincidence_window = 7e-9;
};

/// Quantities derived from the setup: sigma is the Gaussian localization
/// size of the far-field pattern, period the fringe period Lambda.
struct DerivedQuantities {
    double sigma = 0.0;
    double period = 0.0;
};

/// Returns every violated setup invariant as a human-readable message.
/// Empty result means the setup is valid.
std::vector<std::string> validate(const OpticalSetup& setup);

/// sigma = lambda*f/(4*pi*R), period = lambda*f/d. Throws InvalidSetup
/// when validate() reports violations.
DerivedQuantities derive(const OpticalSetup& setup);

/// Parses the unit-suffixed JSON setup object (wavelength_nm,
/// focal_length_mm, mode_separation_um, mode_radius_um, slit_width_um,
/// coincidence_window_ns). Unknown keys are errors; a missing
/// coincidence_window_ns defaults to 7.0. Throws InvalidSetup on parse
/// failure, and on invariant failure unless enforce_invariants is false
/// (the validate CLI path reports violations instead of rejecting).
OpticalSetup setup_from_json_text(const std::string& text, bool enforce_invariants = true);

/// Serializes back to the unit-suffixed JSON object.
std::string setup_to_json_text(const OpticalSetup& setup);

}  // namespace biphoton
