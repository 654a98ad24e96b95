#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellchsh/correlator.hpp"

#include <chrono>
#include <numbers>
#include <random>

using namespace bellchsh;
using cd = std::complex<double>;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double root2 = std::numbers::sqrt2;
}

TEST_CASE("chsh_combine sign pattern") {
    CHECK(chsh_combine(CorrelatorQuad{1.0, 1.0, 1.0, 1.0}) == cd(2.0));
    CHECK(chsh_combine(CorrelatorQuad{1.0, 1.0, 1.0, -1.0}) == cd(4.0));
    CHECK(chsh_combine(CorrelatorQuad{cd(0, 1), 0.0, 0.0, cd(0, 1)}) == cd(0.0));
}

TEST_CASE("chsh_combine is linear") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto draw = [&] { return CorrelatorQuad{cd(u(rng), u(rng)), cd(u(rng), u(rng)), cd(u(rng), u(rng)),
                                                  cd(u(rng), u(rng))}; };
    for (int i = 0; i < 1000; ++i) {
        const CorrelatorQuad p = draw();
        const CorrelatorQuad q = draw();
        CHECK(std::abs(chsh_combine(p + q) - (chsh_combine(p) + chsh_combine(q))) < 1e-15);
    }
}

TEST_CASE("classify") {
    CHECK(classify(2.5, true).classification == Classification::Violation);
    CHECK(classify(2.5, false).classification == Classification::WithinClassical);
    CHECK(classify(3.0, true).classification == Classification::ExceedsTsirelson);
    CHECK(classify(3.0, false).classification == Classification::ExceedsTsirelson);
    CHECK(classify(2.0, true).classification == Classification::WithinClassical);
    CHECK(classify(2.0 + 1e-10, true).classification == Classification::ExceedsClassicalOnly);
    CHECK(classify(2.0 * root2, true).classification == Classification::Violation);
    CHECK(classify(2.0 * root2 + 5e-10, true).classification == Classification::Violation);
    CHECK(classify(2.0 * root2, false).classification == Classification::WithinClassical);

    const ChshResult r = classify(cd(1.5, 2.0), false);
    CHECK(r.magnitude == std::abs(cd(1.5, 2.0)));
    CHECK(r.classical_bound_used == kTsirelsonBound);
    CHECK(classify(-2.5, true).is_violation());
}

TEST_CASE("classify is monotone in the magnitude") {
    for (bool real : {true, false}) {
        int previous = -1;
        for (int i = 0; i <= 4000; ++i) {
            const double m = 3.2 * i / 4000.0;
            const int rank = static_cast<int>(classify(m, real).classification);
            CHECK(rank >= previous);
            previous = rank;
        }
    }
}

TEST_CASE("unitary phase CHSH examples") {
    CHECK(std::abs(unitary_phase_chsh(PhaseSetting(0, 0, 0, 0)) - cd(2.0)) < 1e-15);
    CHECK(std::abs(unitary_phase_chsh(PhaseSetting(0, pi, 0, 0))) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unitary_phase_envelope(0.0) == doctest::Approx(2.0));
    CHECK(unitary_phase_envelope(pi / 2.0) == doctest::Approx(2.0 * root2));
    CHECK(unitary_phase_envelope(pi) == doctest::Approx(2.0));
}

TEST_CASE("phase settings reject non-finite angles") {
    CHECK_THROWS_AS(PhaseSetting(std::nan(""), 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSetting(0, 0, INFINITY, 0), std::invalid_argument);
}

TEST_CASE("envelope and Tsirelson bound over random settings") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0 * pi, 2.0 * pi);
    for (int i = 0; i < 10000; ++i) {
        const PhaseSetting s(u(rng), u(rng), u(rng), u(rng));
        const double z = std::abs(unitary_phase_chsh(s));
        CHECK(z <= unitary_phase_envelope(s.alpha - s.alpha_prime) + 1e-12);
        CHECK(z <= 2.0 * root2 + 1e-12);
    }
}

TEST_CASE("dichotomic maximum is exactly 2") {
    const auto t0 = std::chrono::steady_clock::now();
    const double m = dichotomic_classical_max();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(m == 2.0);
    CHECK(elapsed < 1e-3);
}

TEST_CASE("unconstrained and real-constrained scans") {
    const PhaseScan free_scan = unconstrained_phase_max();
    CHECK(std::abs(free_scan.max_modulus - 2.0 * root2) < 1e-6);
    CHECK(std::abs(unitary_phase_chsh(free_scan.argmax)) == doctest::Approx(free_scan.max_modulus));

    const PhaseScan real_scan = real_constrained_phase_max();
    CHECK(std::abs(real_scan.max_modulus - 2.0) < 1e-12);
    const cd z = unitary_phase_chsh(real_scan.argmax);
    CHECK(std::abs(z.imag()) < 1e-12);

    // α = -β = t: the constrained value is ±2 for any t.
    for (double t : {0.1, 0.7, 2.3}) {
        const cd v = unitary_phase_chsh(PhaseSetting(t, pi + t, -t, -t));
        CHECK(std::abs(v) == doctest::Approx(2.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(real_constrained_phase_max(0.0), std::invalid_argument);
    CHECK_THROWS_AS(unconstrained_phase_max(-1.0), std::invalid_argument);
}
