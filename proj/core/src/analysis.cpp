#include "biphoton/analysis.hpp"

#include "biphoton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;

// Parameter layout: [baseline, amplitude, envelope, period, phase,
// visibility] with an envelope; [amplitude, period, phase, visibility]
// without one. The baseline is dropped in the flat model because b, A and
// V are not separately identifiable in b + A (1 + V cos).
struct Params {
    double b, A, e, P, phi, V;
    bool with_envelope;

    std::vector<double> pack() const {
        if (with_envelope) return {b, A, e, P, phi, V};
        return {A, P, phi, V};
    }
    static Params unpack(const std::vector<double>& v, bool env) {
        if (env) return {v[0], v[1], v[2], v[3], v[4], v[5], true};
        return {0.0, v[0], 1.0, v[1], v[2], v[3], false};
    }
};

double model_value(const Params& p, double s) {
    const double env = p.with_envelope ? std::exp(-s * s / (2.0 * p.e * p.e)) : 1.0;
    return p.b + p.A * env * (1.0 + p.V * std::cos(2.0 * kPi * s / p.P + p.phi));
}

void model_jacobian_row(const Params& p, double s, std::vector<double>& row) {
    const double env = p.with_envelope ? std::exp(-s * s / (2.0 * p.e * p.e)) : 1.0;
    const double arg = 2.0 * kPi * s / p.P + p.phi;
    const double c = std::cos(arg);
    const double sn = std::sin(arg);
    const double mod = 1.0 + p.V * c;
    std::size_t j = 0;
    if (p.with_envelope) {
        row[j++] = 1.0;  // d/db
    }
    row[j++] = env * mod;        // d/dA
    if (p.with_envelope) {
        row[j++] = p.A * env * mod * s * s / (p.e * p.e * p.e);  // d/de
    }
    row[j++] = p.A * env * p.V * sn * 2.0 * kPi * s / (p.P * p.P);  // d/dP
    row[j++] = -p.A * env * p.V * sn;                               // d/dphi
    row[j++] = p.A * env * c;                                       // d/dV
}

// Solves M x = rhs in place; M is small and symmetric positive (semi)
// definite after damping. Gaussian elimination with partial pivoting.
bool solve_linear(std::vector<std::vector<double>> M, std::vector<double> rhs,
                  std::vector<double>& x) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(M[r][col]) > std::abs(M[pivot][col])) pivot = r;
        }
        if (std::abs(M[pivot][col]) < 1e-300) return false;
        std::swap(M[col], M[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= factor * M[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= M[r][c] * x[c];
        x[r] = acc / M[r][r];
    }
    return true;
}

bool invert_matrix(const std::vector<std::vector<double>>& M,
                   std::vector<std::vector<double>>& inv) {
    const std::size_t n = M.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> e(n, 0.0);
        e[col] = 1.0;
        std::vector<double> x;
        if (!solve_linear(M, e, x)) return false;
        for (std::size_t r = 0; r < n; ++r) inv[r][col] = x[r];
    }
    return true;
}

double cost_of(const Params& p, std::span<const FitSample> samples,
               const std::vector<double>& sqrt_w) {
    double cost = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = (model_value(p, samples[i].s) - samples[i].value) * sqrt_w[i];
        cost += r * r;
    }
    return cost;
}

struct Seed {
    double period = 0.0;
    double phase = 0.0;
    double visibility = 0.0;
    double spectral_fraction = 0.0;  // peak magnitude relative to the data swing
};

// Dominant nonzero frequency of the detrended samples (plain O(n^2) DFT;
// sample counts here are small). The trend is a centered moving average:
// subtracting only the mean leaves the broad envelope bump in the
// spectrum, and its k = 1 leakage can outweigh the fringe peak.
Seed spectral_seed(std::span<const FitSample> samples) {
    const std::size_t n = samples.size();
    const double span = samples.back().s - samples.front().s;
    const double step = span / static_cast<double>(n - 1);

    std::size_t half_window = std::max<std::size_t>(2, n / 16);
    std::vector<double> detrended(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (i >= half_window) ? i - half_window : 0;
        const std::size_t hi = std::min(n - 1, i + half_window);
        double avg = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) avg += samples[j].value;
        detrended[i] = samples[i].value - avg / static_cast<double>(hi - lo + 1);
    }

    Seed seed;
    std::size_t best_k = 0;
    double best_mag = 0.0;
    std::complex<double> best_c;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> c{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * kPi * static_cast<double>(k * j) / static_cast<double>(n);
            c += detrended[j] * std::polar(1.0, ang);
        }
        if (std::abs(c) > best_mag) {
            best_mag = std::abs(c);
            best_k = k;
            best_c = c;
        }
    }
    if (best_k == 0) return seed;
    seed.period = static_cast<double>(n) * step / static_cast<double>(best_k);
    // Reference the phase to s = 0 rather than to the first sample.
    seed.phase = std::arg(best_c) + 2.0 * kPi * samples.front().s / seed.period;
    double swing = 0.0;
    for (std::size_t j = 0; j < n; ++j) swing = std::max(swing, std::abs(detrended[j]));
    seed.visibility = std::clamp(2.0 * best_mag / (static_cast<double>(n) * std::max(swing, 1e-300)),
                                 0.05, 1.0);
    seed.spectral_fraction = best_mag / (static_cast<double>(n) * std::max(swing, 1e-300));
    return seed;
}

void canonicalize(Params& p) {
    p.e = std::abs(p.e);
    p.P = std::abs(p.P);
    if (p.V < 0.0) {
        p.V = -p.V;
        p.phi += kPi;
    }
    p.phi = std::remainder(p.phi, 2.0 * kPi);
}

}  // namespace

FitResult fit_fringe(std::span<const FitSample> samples, std::optional<FringeModel> initial,
                     FitOptions options) {
    const std::size_t n = samples.size();
    if (n < 3) throw DegenerateData("fit_fringe: need at least 3 samples");

    double vmin = samples[0].value, vmax = samples[0].value, mean = 0.0;
    for (const auto& s : samples) {
        vmin = std::min(vmin, s.value);
        vmax = std::max(vmax, s.value);
        mean += s.value;
    }
    mean /= static_cast<double>(n);
    if (!(vmax - vmin > 0.0) || !std::isfinite(vmax - vmin)) {
        throw DegenerateData("fit_fringe: constant or non-finite input");
    }

    std::vector<double> sqrt_w(n, 1.0);
    bool have_errors = true;
    for (const auto& s : samples) {
        if (!s.error || !(*s.error > 0.0)) {
            have_errors = false;
            break;
        }
    }
    if (have_errors) {
        for (std::size_t i = 0; i < n; ++i) sqrt_w[i] = 1.0 / *samples[i].error;
    }

    const double span = samples.back().s - samples.front().s;

    Params p{};
    p.with_envelope = options.with_envelope;
    bool envelope_only = false;
    if (initial) {
        p.b = options.with_envelope ? initial->baseline : 0.0;
        p.A = initial->amplitude;
        p.e = options.with_envelope ? initial->envelope_sigma : 1.0;
        p.P = initial->period_s;
        p.phi = initial->phase0;
        p.V = initial->visibility;
    } else {
        const Seed seed = spectral_seed(samples);
        // Without an envelope the model mean is the amplitude itself.
        p.b = options.with_envelope ? mean : 0.0;
        p.A = options.with_envelope ? std::max(vmax - mean, (vmax - vmin) * 0.1) : mean;
        p.P = seed.period;
        p.phi = seed.phase;
        p.V = seed.visibility;
        if (options.with_envelope) {
            // Second moment of the positive part as the envelope scale.
            double wsum = 0.0, ssum = 0.0;
            for (const auto& s : samples) {
                const double y = s.value - vmin;
                wsum += y;
                ssum += y * s.s * s.s;
            }
            p.e = (wsum > 0.0 && ssum > 0.0) ? std::sqrt(ssum / wsum) : span / 4.0;
        }
        // Fewer than 8 samples, or no full fringe period inside the scan:
        // fall back to the envelope-only model.
        if (n < 8 || seed.period <= 0.0 || seed.period >= span) {
            envelope_only = true;
            p.V = 0.0;
            p.P = std::max(span, 1.0);
            p.phi = 0.0;
        }
    }
    if (!(p.P > 0.0)) p.P = span > 0.0 ? span : 1.0;
    if (options.with_envelope && !(p.e > 0.0)) p.e = span > 0.0 ? span / 4.0 : 1.0;

    // Fixing V = 0 in the envelope-only path also freezes phase and period
    // (their Jacobian columns vanish), so fit only [b, A, (e)].
    const bool fit_fringe_terms = !envelope_only;
    std::vector<double> x = p.pack();
    const std::size_t total_dim = x.size();
    const std::size_t dim = fit_fringe_terms ? total_dim : (options.with_envelope ? 3 : 1);

    double lambda = 1e-3;
    double cost = cost_of(p, samples, sqrt_w);
    const double initial_cost = cost;
    int iterations = 0;
    bool converged = false;

    std::vector<std::vector<double>> jtj(dim, std::vector<double>(dim));
    std::vector<double> jtr(dim), row(total_dim), delta;

    for (; iterations < options.max_iterations && !converged; ++iterations) {
        for (auto& r : jtj) std::fill(r.begin(), r.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            model_jacobian_row(p, samples[i].s, row);
            const double resid = (model_value(p, samples[i].s) - samples[i].value) * sqrt_w[i];
            for (std::size_t a = 0; a < dim; ++a) {
                const double ja = row[a] * sqrt_w[i];
                jtr[a] += ja * resid;
                for (std::size_t b = a; b < dim; ++b) jtj[a][b] += ja * row[b] * sqrt_w[i];
            }
        }
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
        }

        bool stepped = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            auto damped = jtj;
            for (std::size_t a = 0; a < dim; ++a) {
                damped[a][a] += lambda * std::max(jtj[a][a], 1e-12);
            }
            std::vector<double> rhs(dim);
            for (std::size_t a = 0; a < dim; ++a) rhs[a] = -jtr[a];
            if (!solve_linear(damped, rhs, delta)) {
                lambda *= 7.0;
                continue;
            }
            std::vector<double> x_try = x;
            for (std::size_t a = 0; a < dim; ++a) x_try[a] += delta[a];
            Params p_try = Params::unpack(x_try, options.with_envelope);
            p_try.with_envelope = options.with_envelope;
            if ((options.with_envelope && !(p_try.e > 0.0)) || !(p_try.P > 0.0)) {
                lambda *= 7.0;
                continue;
            }
            const double cost_try = cost_of(p_try, samples, sqrt_w);
            if (cost_try <= cost) {
                double max_rel_step = 0.0;
                for (std::size_t a = 0; a < dim; ++a) {
                    max_rel_step = std::max(max_rel_step,
                                            std::abs(delta[a]) / (std::abs(x[a]) + 1e-30));
                }
                x = x_try;
                p = p_try;
                cost = cost_try;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (max_rel_step < options.step_tolerance) converged = true;
                break;
            }
            lambda *= 7.0;
        }
        if (!stepped) {
            converged = true;  // no descent step exists within damping range
        }
    }
    if (!converged) {
        throw NoConvergence("fit_fringe: iteration cap reached");
    }

    canonicalize(p);

    // Covariance from the undamped normal matrix, scaled by the residual
    // variance.
    FringeUncertainties unc{};
    {
        for (auto& r : jtj) std::fill(r.begin(), r.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            model_jacobian_row(p, samples[i].s, row);
            for (std::size_t a = 0; a < dim; ++a) {
                for (std::size_t b = a; b < dim; ++b) {
                    jtj[a][b] += row[a] * row[b] * sqrt_w[i] * sqrt_w[i];
                }
            }
        }
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
        }
        const double dof = std::max(1.0, static_cast<double>(n) - static_cast<double>(dim));
        const double s2 = cost / dof;
        std::vector<std::vector<double>> cov;
        if (invert_matrix(jtj, cov)) {
            std::vector<double> se(total_dim, 0.0);
            for (std::size_t a = 0; a < dim; ++a) {
                se[a] = std::sqrt(std::max(0.0, cov[a][a]) * s2);
            }
            std::size_t j = 0;
            if (options.with_envelope) {
                unc.baseline = se[j++];
                unc.amplitude = se[j++];
                unc.envelope_sigma = se[j++];
            } else {
                unc.amplitude = se[j++];
            }
            if (fit_fringe_terms) {
                unc.period_s = se[j++];
                unc.phase0 = se[j++];
                unc.visibility = se[j++];
            }
        }
    }

    FitResult result;
    result.model.baseline = p.b;
    result.model.amplitude = p.A;
    result.model.envelope_sigma = options.with_envelope ? p.e : 0.0;
    result.model.period_s = p.P;
    result.model.phase0 = p.phi;
    result.model.visibility = p.V;
    if (p.V > 1.0) {
        result.model.visibility = 1.0;
        result.model.clamped = true;
    }
    result.uncertainties = unc;
    result.residual_norm = std::sqrt(cost);
    result.iterations = iterations;
    result.converged = true;
    result.envelope_only = envelope_only;
    result.lambda_reported = 2.0 * p.P;
    result.lambda_reported_se = 2.0 * unc.period_s;
    (void)initial_cost;
    return result;
}

double visibility_from_extrema(std::span<const FitSample> samples,
                               std::optional<double> envelope_sigma) {
    if (samples.size() < 3) throw DegenerateData("visibility_from_extrema: need >= 3 samples");
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (const auto& s : samples) {
        double value = s.value;
        if (envelope_sigma) {
            if (std::abs(s.s) > *envelope_sigma / 2.0) continue;
            value /= std::exp(-s.s * s.s / (2.0 * *envelope_sigma * *envelope_sigma));
        }
        vmax = std::max(vmax, value);
        vmin = std::min(vmin, value);
        ++used;
    }
    if (used < 3) throw DegenerateData("visibility_from_extrema: window keeps < 3 samples");
    if (vmax + vmin == 0.0) throw DegenerateData("visibility_from_extrema: max + min = 0");
    return (vmax - vmin) / (vmax + vmin);
}

ComparisonReport compare(const FitResult& fit, const OpticalSetup& setup) {
    const auto derived = derive(setup);
    ComparisonReport rep;
    rep.lambda_fitted = fit.lambda_reported;
    rep.lambda_se = fit.lambda_reported_se;
    rep.lambda_theory = derived.period;
    rep.lambda_ratio = fit.lambda_reported / derived.period;
    rep.envelope_fitted_s = fit.model.envelope_sigma;
    rep.envelope_theory_s = derived.sigma / std::numbers::sqrt2;
    rep.envelope_ratio =
        rep.envelope_theory_s > 0.0 ? rep.envelope_fitted_s / rep.envelope_theory_s : 0.0;
    rep.visibility = fit.model.visibility;
    rep.visibility_se = fit.uncertainties.visibility;
    rep.exceedance_sigmas = rep.visibility_se > 0.0
                                ? (rep.visibility - rep.classical_bound) / rep.visibility_se
                                : 0.0;
    return rep;
}

std::string ComparisonReport::text() const {
    char buf[1024];
    std::snprintf(buf, sizeof(buf),
                  "fringe period  : fitted %.4g um +- %.2g um, theory %.4g um (ratio %.4f, "
                  "%.1f%% %s theory)\n"
                  "envelope (in s): fitted %.4g um, theory %.4g um (ratio %.4f)\n"
                  "visibility     : %.4f +- %.4f; classical bound %.2f, exceeded by %.1f "
                  "standard errors\n",
                  lambda_fitted * 1e6, lambda_se * 1e6, lambda_theory * 1e6, lambda_ratio,
                  std::abs(1.0 - lambda_ratio) * 100.0,
                  lambda_ratio <= 1.0 ? "below" : "above", envelope_fitted_s * 1e6,
                  envelope_theory_s * 1e6, envelope_ratio, visibility, visibility_se,
                  classical_bound, exceedance_sigmas);
    return buf;
}

}  // namespace biphoton
