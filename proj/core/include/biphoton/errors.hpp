#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Misconfigured interferometer parameters (signals a bad input file).
struct InvalidSetup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state amplitude vector whose norm deviates from 1 beyond tolerance.
struct NotNormalized : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature step too coarse for the requested far-field coordinate.
struct NyquistViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Nonlinear fit hit the iteration cap before meeting the step tolerance.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data carries no usable signal (e.g. constant samples).
struct DegenerateData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace biphoton
