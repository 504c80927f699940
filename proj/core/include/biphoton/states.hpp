#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace biphoton {

/// Two-photon state over the two fiber modes, expressed in the
/// {|2,0>, |0,2>, |1,1>} basis. Immutable value type.
struct TwoPhotonState {
    std::complex<double> amp20;
    std::complex<double> amp02;
    std::complex<double> amp11;

    double norm_squared() const {
        return std::norm(amp20) + std::norm(amp02) + std::norm(amp11);
    }
};

struct OccupationProbabilities {
    double p20;
    double p02;
    double p11;
};

constexpr double kNormTolerance = 1e-12;

bool is_normalized(const TwoPhotonState& state, double tol = kNormTolerance);

/// State behind the half-wave-plate preparation:
///   amp20 = sin(4a)/sqrt(2)
///   amp02 = sin(4a)/sqrt(2) * e^{i 2 theta}
///   amp11 = cos(4a) * e^{i theta}
/// The interferometer phase theta contributes e^{i theta} per photon in
/// mode b. alpha = 0 gives the separable state, alpha = pi/8 a NOON state.
TwoPhotonState prepare_from_hwp(double alpha, double theta);

/// (|2,0> + e^{i 2 theta} |0,2>)/sqrt(2).
TwoPhotonState noon(double theta);

/// |1,1>.
TwoPhotonState separable();

/// Applies an additional interferometer phase to an already prepared
/// state (e^{i theta} per photon in mode b).
TwoPhotonState with_phase(const TwoPhotonState& state, double theta);

/// Squared moduli of the three amplitudes. Throws NotNormalized.
OccupationProbabilities occupation_probabilities(const TwoPhotonState& state);

/// Coincidence pairing in the state-characterization measurement: both
/// detectors behind a 50/50 split of one fiber output, or one detector
/// per output.
enum class Pairing { same_output, different_outputs };

/// Normalization of the characterization curve: peak-1 relative rate, or
/// the raw occupation probability feeding it.
enum class CurveNormalization { peak, probability };

/// Relative coincidence rate vs HWP angle (theta = 0 states). same_output
/// follows p20, different_outputs follows p11. With peak normalization
/// the curves are sin^2(4a) and cos^2(4a); probability mode returns
/// sin^2(4a)/2 and cos^2(4a).
std::vector<std::pair<double, double>> characterization_scan(
    std::span<const double> alphas, Pairing pairing,
    CurveNormalization normalization = CurveNormalization::peak);

}  // namespace biphoton
