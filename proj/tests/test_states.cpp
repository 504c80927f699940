#include "biphoton/errors.hpp"
#include "biphoton/states.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace biphoton;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

TEST_CASE("preparation at the named angles") {
    SUBCASE("alpha = 0 gives the separable state") {
        const auto s = prepare_from_hwp(0.0, 0.0);
        CHECK(std::abs(s.amp20) == doctest::Approx(0.0));
        CHECK(std::abs(s.amp02) == doctest::Approx(0.0));
        CHECK(s.amp11.real() == doctest::Approx(1.0));
    }
    SUBCASE("alpha = pi/8 gives the NOON state") {
        const auto s = prepare_from_hwp(kPi / 8.0, 0.0);
        CHECK(s.amp20.real() == doctest::Approx(kInvSqrt2));
        CHECK(s.amp02.real() == doctest::Approx(kInvSqrt2));
        CHECK(std::abs(s.amp11) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("alpha = pi/16 mixture") {
        const auto s = prepare_from_hwp(kPi / 16.0, 0.0);
        CHECK(s.amp20.real() == doctest::Approx(0.5));
        CHECK(s.amp02.real() == doctest::Approx(0.5));
        CHECK(s.amp11.real() == doctest::Approx(kInvSqrt2));
        CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("noon and separable shortcuts") {
    const auto n0 = noon(0.0);
    CHECK(n0.amp20.real() == doctest::Approx(kInvSqrt2));
    CHECK(n0.amp02.real() == doctest::Approx(kInvSqrt2));

    // e^{i 2 (pi/2)} = -1
    const auto n90 = noon(kPi / 2.0);
    CHECK(n90.amp02.real() == doctest::Approx(-kInvSqrt2));
    CHECK(n90.amp02.imag() == doctest::Approx(0.0).epsilon(1e-15));

    const auto sep = separable();
    CHECK(sep.amp11.real() == doctest::Approx(1.0));
}

TEST_CASE("prepare_from_hwp is normalized for every alpha, theta") {
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double alpha = -2.0 * kPi + i * 0.1 * kPi;
            const double theta = j * 0.2 * kPi;
            const auto s = prepare_from_hwp(alpha, theta);
            CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("occupation probabilities") {
    const auto sep = occupation_probabilities(separable());
    CHECK(sep.p20 == 0.0);
    CHECK(sep.p02 == 0.0);
    CHECK(sep.p11 == doctest::Approx(1.0));

    SUBCASE("theta drops out of the moduli") {
        for (double theta : {0.0, 0.3, 1.7, kPi}) {
            const auto p = occupation_probabilities(noon(theta));
            CHECK(p.p20 == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(p.p02 == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(p.p11 == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
    SUBCASE("pi/16 mixture") {
        const auto p = occupation_probabilities(prepare_from_hwp(kPi / 16.0, 0.0));
        CHECK(p.p20 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(p.p02 == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(p.p11 == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("unnormalized states are rejected") {
        TwoPhotonState bad{0.9, 0.0, 0.0};
        CHECK_THROWS_AS(occupation_probabilities(bad), NotNormalized);
    }
}

TEST_CASE("characterization scan extrema and periodicity") {
    std::vector<double> alphas;
    for (int i = 0; i <= 400; ++i) alphas.push_back(i * kPi / 400.0);

    const auto same = characterization_scan(alphas, Pairing::same_output);
    const auto diff = characterization_scan(alphas, Pairing::different_outputs);

    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double a = alphas[i];
        const double s4 = std::sin(4.0 * a);
        const double c4 = std::cos(4.0 * a);
        // Peak-normalized curves; probability mode carries the 1/2.
        CHECK(same[i].second == doctest::Approx(s4 * s4).epsilon(1e-12));
        CHECK(diff[i].second == doctest::Approx(c4 * c4).epsilon(1e-12));
    }

    const auto same_prob =
        characterization_scan(alphas, Pairing::same_output, CurveNormalization::probability);
    const auto diff_prob = characterization_scan(alphas, Pairing::different_outputs,
                                                 CurveNormalization::probability);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double s4 = std::sin(4.0 * alphas[i]);
        const double c4 = std::cos(4.0 * alphas[i]);
        CHECK(std::abs(same_prob[i].second - s4 * s4 / 2.0) < 1e-12);
        CHECK(std::abs(diff_prob[i].second - c4 * c4) < 1e-12);
    }

    SUBCASE("same-output curve: zero at 0, peak at pi/8; period pi/4") {
        CHECK(same[0].second == doctest::Approx(0.0));
        CHECK(2.0 * occupation_probabilities(prepare_from_hwp(kPi / 8.0, 0.0)).p20 ==
              doctest::Approx(1.0));
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const double shifted = std::sin(4.0 * (alphas[i] + kPi / 4.0));
            CHECK(same[i].second == doctest::Approx(shifted * shifted).epsilon(1e-9));
        }
    }
    SUBCASE("different-output curve: peak at 0, zero at pi/8") {
        CHECK(diff[0].second == doctest::Approx(1.0));
        CHECK(occupation_probabilities(prepare_from_hwp(kPi / 8.0, 0.0)).p11 ==
              doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("both ideal curves have visibility 1") {
        auto vis = [](const std::vector<std::pair<double, double>>& curve) {
            double lo = 1e300, hi = -1e300;
            for (const auto& [a, r] : curve) {
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            return (hi - lo) / (hi + lo);
        };
        CHECK(vis(same) == doctest::Approx(1.0));
        CHECK(vis(diff) == doctest::Approx(1.0));
    }
}

TEST_CASE("with_phase matches preparation-time phase") {
    const auto direct = prepare_from_hwp(kPi / 8.0, 0.7);
    const auto late = with_phase(noon(0.0), 0.7);
    CHECK(std::abs(direct.amp20 - late.amp20) < 1e-14);
    CHECK(std::abs(direct.amp02 - late.amp02) < 1e-14);
    CHECK(std::abs(direct.amp11 - late.amp11) < 1e-14);
}
