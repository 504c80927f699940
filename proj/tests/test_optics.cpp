#include "biphoton/errors.hpp"
#include "biphoton/optics.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

using namespace biphoton;

namespace {

constexpr double kPi = std::numbers::pi;

// Black-box norm of a two-photon amplitude with a shared, separable y
// profile: 2D quadrature on the y = 0 slice times the y factor measured
// along one axis. norm = I2D * I1D^2 / W^2.
double wavefunction_norm(const std::function<std::complex<double>(PlanePoint, PlanePoint)>& psi,
                         double x_extent, double y_extent, int points, double ref_x = 0.0) {
    const double w = std::norm(psi({ref_x, 0.0}, {ref_x, 0.0}));
    REQUIRE(w > 0.0);
    const double i2d = testutil::simpson2d(
        [&](double x1, double x2) { return std::norm(psi({x1, 0.0}, {x2, 0.0})); }, -x_extent,
        x_extent, points);
    const double i1d = testutil::simpson(
        [&](double y) { return std::norm(psi({ref_x, y}, {ref_x, 0.0})); }, -y_extent, y_extent,
        points);
    return i2d * i1d * i1d / (w * w);
}

}  // namespace

TEST_CASE("gaussian mode") {
    const double R = 4.3e-6;
    SUBCASE("peak value 1/(sqrt(2 pi) R)") {
        CHECK(gaussian_mode({0.0, 0.0}, R) == doctest::Approx(9.278e4).epsilon(1e-3));
    }
    SUBCASE("1/e point at |u| = 2R") {
        CHECK(gaussian_mode({2.0 * R, 0.0}, R) ==
              doctest::Approx(gaussian_mode({0.0, 0.0}, R) * std::exp(-1.0)).epsilon(1e-12));
    }
    SUBCASE("unit normalization of |mode|^2") {
        const double norm = testutil::simpson2d(
            [&](double x, double y) {
                const double v = gaussian_mode({x, y}, R);
                return v * v;
            },
            -8.0 * R, 8.0 * R, 400);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("near field structure") {
    const auto setup = testutil::reference_setup();
    const double half_d = setup.mode_separation / 2.0;
    const double R = setup.mode_radius;

    SUBCASE("NOON near field matches the modal expansion term by term") {
        const double theta = 0.55;
        const auto state = noon(theta);
        const PlanePoint u1{-half_d + 0.3 * R, 0.7 * R};
        const PlanePoint u2{-half_d - 0.5 * R, -0.2 * R};
        const auto value = near_field(state, u1, u2, setup);
        auto mode = [&](PlanePoint u, double center) {
            return gaussian_mode({u.x - center, u.y}, R);
        };
        const std::complex<double> expected =
            (mode(u1, -half_d) * mode(u2, -half_d) +
             std::polar(1.0, 2.0 * theta) * mode(u1, half_d) * mode(u2, half_d)) /
            std::numbers::sqrt2;
        CHECK(std::abs(value - expected) <= 1e-9 * std::abs(expected));
    }
    SUBCASE("separable near field is the symmetrized cross product") {
        const PlanePoint u1{-half_d + 0.4 * R, 0.0};
        const PlanePoint u2{half_d - 0.6 * R, 0.3 * R};
        const auto value = near_field(separable(), u1, u2, setup);
        auto mode = [&](PlanePoint u, double center) {
            return gaussian_mode({u.x - center, u.y}, R);
        };
        const std::complex<double> expected =
            (mode(u1, -half_d) * mode(u2, half_d) + mode(u1, half_d) * mode(u2, -half_d)) /
            std::numbers::sqrt2;
        CHECK(std::abs(value - expected) <= 1e-9 * std::abs(expected));
    }
    SUBCASE("bosonic symmetry under u1 <-> u2") {
        const auto state = prepare_from_hwp(kPi / 16.0, 0.3);
        const PlanePoint u1{-half_d + R, 0.5 * R};
        const PlanePoint u2{half_d - 2.0 * R, -0.4 * R};
        CHECK(std::abs(near_field(state, u1, u2, setup) - near_field(state, u2, u1, setup)) <
              1e-18);
    }
    SUBCASE("unit norm by quadrature") {
        for (const auto& state : {noon(0.4), separable(), prepare_from_hwp(kPi / 16.0, 0.0)}) {
            // Reference the y-slice to a mode center so the slice amplitude
            // is well away from zero.
            const double norm = wavefunction_norm(
                [&](PlanePoint a, PlanePoint b) { return near_field(state, a, b, setup); },
                half_d + 8.0 * R, 8.0 * R, 700, half_d);
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("unnormalized states are rejected") {
        CHECK_THROWS_AS(near_field({0.5, 0.0, 0.0}, {0, 0}, {0, 0}, setup), NotNormalized);
    }
}

TEST_CASE("analytic far field reproduces the closed forms") {
    const auto setup = testutil::reference_setup();
    const auto derived = derive(setup);
    const double sigma = derived.sigma;
    const double lambda_cap = derived.period;
    const double prefactor = 1.0 / (2.0 * kPi * sigma * sigma);

    SUBCASE("NOON intensity: envelope times 1 + cos(2 pi (x1+x2)/Lambda - 2 theta)") {
        const double theta = 0.8;
        const auto state = noon(theta);
        for (double x1 : {-sigma, 0.2 * sigma, sigma}) {
            for (double x2 : {-0.7 * sigma, 0.5 * sigma}) {
                const double y1 = 0.3 * sigma, y2 = -0.4 * sigma;
                const double expected =
                    prefactor * prefactor *
                    std::exp(-(x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2) / (2.0 * sigma * sigma)) *
                    (1.0 + std::cos(2.0 * kPi * (x1 + x2) / lambda_cap - 2.0 * theta));
                CHECK(intensity(state, {x1, y1}, {x2, y2}, setup) ==
                      doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }
    SUBCASE("separable intensity: fringes in x1 - x2") {
        for (double x1 : {-0.8 * sigma, 0.1 * sigma}) {
            for (double x2 : {-0.2 * sigma, 0.9 * sigma}) {
                const double expected =
                    prefactor * prefactor *
                    std::exp(-(x1 * x1 + x2 * x2) / (2.0 * sigma * sigma)) *
                    (1.0 + std::cos(2.0 * kPi * (x1 - x2) / lambda_cap));
                CHECK(intensity(separable(), {x1, 0.0}, {x2, 0.0}, setup) ==
                      doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }
    SUBCASE("single-pixel value at the origin: (1/(2 pi sigma^2))^2 (1 + cos 2 theta)") {
        for (double theta : {0.0, 0.4, kPi / 2.0, 2.4}) {
            CHECK(intensity(noon(theta), {0, 0}, {0, 0}, setup) ==
                  doctest::Approx(prefactor * prefactor * (1.0 + std::cos(2.0 * theta)))
                      .epsilon(1e-10));
        }
        CHECK(intensity(noon(0.0), {0, 0}, {0, 0}, setup) ==
              doctest::Approx(2.0 * prefactor * prefactor).epsilon(1e-12));
    }
    SUBCASE("Parseval: far-field norm is 1") {
        for (const auto& state : {noon(0.0), separable(), prepare_from_hwp(kPi / 16.0, 0.0)}) {
            const double norm = wavefunction_norm(
                [&](PlanePoint a, PlanePoint b) { return far_field_analytic(state, a, b, setup); },
                6.0 * sigma, 6.0 * sigma, 500);
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("fringe direction invariances") {
    const auto setup = testutil::reference_setup();
    const double sigma = derive(setup).sigma;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-1.5 * sigma, 1.5 * sigma);

    for (int trial = 0; trial < 20; ++trial) {
        const double x1 = coord(rng), x2 = coord(rng), delta = coord(rng) * 0.3;
        // NOON depends on x1 + x2 only; divide out the envelope change.
        const double noon_a = intensity(noon(0.3), {x1, 0}, {x2, 0}, setup);
        const double noon_b = intensity(noon(0.3), {x1 + delta, 0}, {x2 - delta, 0}, setup);
        const double env_a = std::exp(-(x1 * x1 + x2 * x2) / (2 * sigma * sigma));
        const double env_b = std::exp(-((x1 + delta) * (x1 + delta) + (x2 - delta) * (x2 - delta)) /
                                      (2 * sigma * sigma));
        CHECK(noon_b / env_b == doctest::Approx(noon_a / env_a).epsilon(1e-10));

        // Separable depends on x1 - x2 only.
        const double sep_a = intensity(separable(), {x1, 0}, {x2, 0}, setup) / env_a;
        const double sep_b =
            intensity(separable(), {x1 + delta, 0}, {x2 + delta, 0}, setup) /
            std::exp(-((x1 + delta) * (x1 + delta) + (x2 + delta) * (x2 + delta)) /
                     (2 * sigma * sigma));
        CHECK(sep_b == doctest::Approx(sep_a).epsilon(1e-10));
    }
}

TEST_CASE("separable pattern is phase invariant") {
    const auto setup = testutil::reference_setup();
    const double sigma = derive(setup).sigma;
    for (double theta : {0.1, 1.2, 2.9}) {
        for (double x : {-sigma, 0.4 * sigma}) {
            const double base = intensity(prepare_from_hwp(0.0, 0.0), {x, 0}, {-x / 2, 0}, setup);
            const double shifted =
                intensity(prepare_from_hwp(0.0, theta), {x, 0}, {-x / 2, 0}, setup);
            CHECK(std::abs(shifted - base) <= 1e-12 * base);
        }
    }
}

TEST_CASE("phase shift translates NOON fringes along x1 = x2") {
    const auto setup = testutil::reference_setup();
    const auto derived = derive(setup);
    const double lambda_cap = derived.period;
    const double dtheta = 0.9;
    const double shift = lambda_cap * dtheta / (2.0 * kPi);  // s-shift equivalent to dtheta

    // Compare envelope-corrected curves: rate(theta, s) == rate(theta + dtheta, s + shift).
    for (int i = -10; i <= 10; ++i) {
        const double s = i * lambda_cap / 40.0;
        auto corrected = [&](double theta, double pos) {
            return intensity(noon(theta), {pos, 0}, {pos, 0}, setup) /
                   std::exp(-pos * pos / (derived.sigma * derived.sigma));
        };
        CHECK(corrected(0.2, s) == doctest::Approx(corrected(0.2 + dtheta, s + shift)).epsilon(1e-9));
    }
}

TEST_CASE("numeric oracle agrees with the analytic far field") {
    const auto setup = testutil::reference_setup();
    const double sigma = derive(setup).sigma;
    const QuadratureSpec quad{8.0 * setup.mode_radius, 512};

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(-3.0 * sigma, 3.0 * sigma);
    const auto mixture = prepare_from_hwp(kPi / 16.0, 0.0);
    for (const auto& state : {noon(0.0), separable(), mixture}) {
        for (int trial = 0; trial < 6; ++trial) {
            const PlanePoint r1{coord(rng), coord(rng)};
            const PlanePoint r2{coord(rng), coord(rng)};
            const auto analytic = far_field_analytic(state, r1, r2, setup);
            const auto numeric = far_field_numeric(state, r1, r2, setup, quad);
            CHECK(std::abs(numeric - analytic) <= 1e-6 * std::abs(analytic));
        }
    }
}

TEST_CASE("numeric oracle edge cases") {
    const auto setup = testutil::reference_setup();
    const auto derived = derive(setup);
    const QuadratureSpec quad{8.0 * setup.mode_radius, 512};

    SUBCASE("fringe null at x1 = x2 = Lambda/4") {
        const double s = derived.period / 4.0;
        const double value = std::norm(far_field_numeric(noon(0.0), {s, 0}, {s, 0}, setup, quad));
        const double peak = std::norm(far_field_numeric(noon(0.0), {0, 0}, {0, 0}, setup, quad));
        CHECK(value / peak < 1e-9);
    }
    SUBCASE("bosonic symmetry") {
        const PlanePoint r1{0.7 * derived.sigma, -0.2 * derived.sigma};
        const PlanePoint r2{-0.4 * derived.sigma, 0.9 * derived.sigma};
        const auto a = far_field_numeric(noon(0.3), r1, r2, setup, quad);
        const auto b = far_field_numeric(noon(0.3), r2, r1, setup, quad);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
    SUBCASE("Nyquist violations are rejected") {
        CHECK_THROWS_AS(
            far_field_numeric(noon(0.0), {400.0 * derived.sigma, 0}, {0, 0}, setup, quad),
            NyquistViolation);
        CHECK_THROWS_AS(far_field_numeric(noon(0.0), {0, 0}, {0, 0}, setup,
                                          QuadratureSpec{8.0 * setup.mode_radius, 32}),
                        NyquistViolation);
    }
    SUBCASE("convergence: doubling the grid changes nothing at 1e-8") {
        const PlanePoint r1{derived.sigma, 0.5 * derived.sigma};
        const PlanePoint r2{-0.3 * derived.sigma, 0.0};
        const auto coarse = far_field_numeric(noon(0.2), r1, r2, setup, quad);
        const auto fine = far_field_numeric(noon(0.2), r1, r2, setup,
                                            QuadratureSpec{quad.half_extent, 1024});
        CHECK(std::abs(coarse - fine) <= 1e-8 * std::abs(fine));
    }
}
