#pragma once

#include "biphoton/setup.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace biphoton {

/// Fringe-under-Gaussian-envelope model evaluated along one scan line:
///   value(s) = baseline
///            + amplitude * exp(-s^2 / (2 envelope_sigma^2))
///            * (1 + visibility * cos(2 pi s / period_s + phase0))
/// period_s is the period in the scan parameter s; the physical fringe
/// period is 2 * period_s (both detectors move by s).
struct FringeModel {
    double baseline = 0.0;
    double amplitude = 0.0;
    double envelope_sigma = 0.0;
    double period_s = 0.0;
    double phase0 = 0.0;
    double visibility = 0.0;
    bool clamped = false;  // set when the raw fit left [0, 1] in visibility
};

/// Per-parameter standard errors, same layout as FringeModel.
struct FringeUncertainties {
    double baseline = 0.0;
    double amplitude = 0.0;
    double envelope_sigma = 0.0;
    double period_s = 0.0;
    double phase0 = 0.0;
    double visibility = 0.0;
};

struct FitResult {
    FringeModel model;
    FringeUncertainties uncertainties;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool envelope_only = false;  // too few samples / span below one period
    double lambda_reported = 0.0;      // 2 * period_s
    double lambda_reported_se = 0.0;
};

struct FitSample {
    double s = 0.0;
    double value = 0.0;
    std::optional<double> error;  // 1/error^2 weights when present
};

struct FitOptions {
    bool with_envelope = true;  // false for phase / hwp scans
    int max_iterations = 200;
    double step_tolerance = 1e-10;
};

/// Weighted nonlinear least squares (damped Gauss-Newton with
/// Levenberg-style damping). Initialization: baseline from the mean,
/// period from the dominant DFT frequency of the detrended samples,
/// envelope from the second moment. Throws DegenerateData on constant
/// input, NoConvergence at the iteration cap.
FitResult fit_fringe(std::span<const FitSample> samples,
                     std::optional<FringeModel> initial = {}, FitOptions options = {});

/// Model-free (max - min)/(max + min). When envelope_sigma is given the
/// samples are envelope-corrected first and restricted to
/// |s| <= envelope_sigma / 2. Throws DegenerateData when max + min = 0.
double visibility_from_extrema(std::span<const FitSample> samples,
                               std::optional<double> envelope_sigma = {});

/// Fitted-vs-theory comparison for a converged fit.
struct ComparisonReport {
    double lambda_fitted = 0.0;
    double lambda_se = 0.0;
    double lambda_theory = 0.0;
    double lambda_ratio = 0.0;
    double envelope_fitted_s = 0.0;   // envelope scale along the scan line
    double envelope_theory_s = 0.0;   // sigma / sqrt(2)
    double envelope_ratio = 0.0;
    double visibility = 0.0;
    double visibility_se = 0.0;
    double classical_bound = 0.5;
    double exceedance_sigmas = 0.0;   // (V - 0.5) / se(V)

    std::string text() const;
};

ComparisonReport compare(const FitResult& fit, const OpticalSetup& setup);

}  // namespace biphoton
