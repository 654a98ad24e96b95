#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellchsh/angular.hpp"

#include <numbers>
#include <random>

using namespace bellchsh;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double root2 = std::numbers::sqrt2;
}

TEST_CASE("pair correlator values") {
    CHECK(pair_correlator(0.0, 0.0) == 1.0);
    CHECK(pair_correlator(pi / 4.0, 0.0) == doctest::Approx(root2 / 2.0));
    CHECK(pair_correlator(0.0, pi) == doctest::Approx(-1.0));
    CHECK(pair_correlator_bruteforce(0.3, 0.1) == doctest::Approx(std::cos(0.2)).epsilon(1e-15));
    CHECK(pair_correlator_bruteforce(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(std::abs(pair_correlator_bruteforce(pi / 2.0, 0.0)) < 1e-15);
}

TEST_CASE("closed form against the state vector and periodicity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0 * pi, 2.0 * pi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        worst = std::max(worst, std::abs(pair_correlator(a, b) - pair_correlator_bruteforce(a, b)));
        CHECK(pair_correlator(a + 2.0 * pi, b) == doctest::Approx(pair_correlator(a, b)).epsilon(1e-12));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("angular CHSH examples") {
    CHECK(angular_chsh(AngularSetting(0, 0, 0, 0)) == 2.0);
    CHECK(angular_chsh(maximizing_angles()) == doctest::Approx(2.0 * root2).epsilon(1e-15));
    // The quarter-turn sets give 0 with the standard sign pattern.
    CHECK(std::abs(angular_chsh(staggered_angles())) < 1e-15);
    CHECK(std::abs(angular_chsh(AngularSetting(0, pi / 2.0, -pi / 4.0, pi / 4.0))) < 1e-15);
    CHECK_THROWS_AS(AngularSetting(0, std::nan(""), 0, 0), std::invalid_argument);
}

TEST_CASE("bounded by 2 sqrt 2 and never a violation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const AngularSetting s(u(rng), u(rng), u(rng), u(rng));
        CHECK(std::abs(angular_chsh(s)) <= 2.0 * root2 + 1e-12);
        CHECK_FALSE(is_violation(s));
    }
    CHECK_FALSE(is_violation(AngularSetting{}));
    CHECK(kCommutingRationale.find("commut") != std::string_view::npos);
}

TEST_CASE("optimizer finds 2 sqrt 2") {
    const AngularMaximum m = maximize_angular(0);
    CHECK(std::abs(m.value - 2.0 * root2) < 1e-9);
    CHECK_FALSE(m.violation);
    CHECK(maximize_angular(0).value == m.value);
}
