#include "biphoton/states.hpp"

#include "biphoton/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {
constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
}

bool is_normalized(const TwoPhotonState& state, double tol) {
    return std::abs(state.norm_squared() - 1.0) <= tol;
}

TwoPhotonState prepare_from_hwp(double alpha, double theta) {
    const double s = std::sin(4.0 * alpha);
    const double c = std::cos(4.0 * alpha);
    const std::complex<double> phase1 = std::polar(1.0, theta);
    const std::complex<double> phase2 = std::polar(1.0, 2.0 * theta);
    return TwoPhotonState{s * kInvSqrt2, s * kInvSqrt2 * phase2, c * phase1};
}

TwoPhotonState noon(double theta) {
    return prepare_from_hwp(std::numbers::pi / 8.0, theta);
}

TwoPhotonState separable() { return prepare_from_hwp(0.0, 0.0); }

TwoPhotonState with_phase(const TwoPhotonState& state, double theta) {
    return TwoPhotonState{state.amp20, state.amp02 * std::polar(1.0, 2.0 * theta),
                          state.amp11 * std::polar(1.0, theta)};
}

OccupationProbabilities occupation_probabilities(const TwoPhotonState& state) {
    if (!is_normalized(state)) {
        throw NotNormalized("two-photon state norm deviates from 1");
    }
    return OccupationProbabilities{std::norm(state.amp20), std::norm(state.amp02),
                                   std::norm(state.amp11)};
}

std::vector<std::pair<double, double>> characterization_scan(
    std::span<const double> alphas, Pairing pairing, CurveNormalization normalization) {
    if (alphas.empty()) throw std::invalid_argument("characterization_scan: empty alphas");
    std::vector<std::pair<double, double>> out;
    out.reserve(alphas.size());
    // Theoretical peaks: p20 reaches 1/2 at alpha = pi/8, p11 reaches 1 at 0.
    const double scale =
        (normalization == CurveNormalization::peak && pairing == Pairing::same_output) ? 2.0
                                                                                       : 1.0;
    for (double alpha : alphas) {
        const auto probs = occupation_probabilities(prepare_from_hwp(alpha, 0.0));
        const double rate = (pairing == Pairing::same_output) ? probs.p20 : probs.p11;
        out.emplace_back(alpha, scale * rate);
    }
    return out;
}

}  // namespace biphoton
