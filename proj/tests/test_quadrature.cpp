#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellchsh/gaussian_integrals.hpp"
#include "bellchsh/phase_space.hpp"
#include "bellchsh/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace bellchsh;
using cd = std::complex<double>;

namespace {

QuadratureSpec spec(std::function<cd(double)> f, double lo, double hi, double tol = 1e-12) {
    QuadratureSpec s;
    s.integrand = std::move(f);
    s.lo = lo;
    s.hi = hi;
    s.tol = tol;
    return s;
}

const double sqrt_pi = std::sqrt(std::numbers::pi);

}  // namespace

TEST_CASE("elementary integrals") {
    const QuadratureResult square = integrate(spec([](double x) { return cd(x * x); }, 0.0, 1.0));
    CHECK(std::abs(square.value - 1.0 / 3.0) < 1e-12);
    CHECK(square.converged());

    const QuadratureResult gauss = integrate(spec([](double x) { return cd(std::exp(-x * x)); }, -10.0, 10.0, 1e-11));
    CHECK(std::abs(gauss.value - sqrt_pi) < 1e-10);

    const QuadratureResult wave =
        integrate(spec([](double x) { return std::exp(-2.0 * x * x) * std::polar(1.0, 5.0 * x); }, -10.0, 10.0));
    const cd expected = i1_closed(GaussianIntegralArgs(1.0, 5.0, 0.0)).value;
    CHECK(std::abs(wave.value - std::sqrt(std::numbers::pi / 2.0) * std::exp(-25.0 / 8.0)) < 1e-11);
    CHECK(std::abs(wave.value - expected) < 1e-11);
}

TEST_CASE("factored integrals") {
    const auto g = spec([](double x) { return cd(std::exp(-x * x)); }, -12.0, 12.0);
    const QuadratureResult r = integrate_2d_factored(g, g);
    CHECK(std::abs(r.value - std::numbers::pi) < 1e-10);
    CHECK(r.converged());

    const BellWavefunction w(1.0, 10.0);
    const QuadratureResult norm = normalization_by_quadrature(w, 1e-9);
    CHECK(std::abs(norm.value - 1.0) < 1e-6);
    const QuadratureResult zero = master_integral_oracle(w, 0.0, 0.0, 0.0, 0.0, 1e-9);
    CHECK(std::abs(zero.value - 1.0) < 1e-6);
}

TEST_CASE("error estimate bounds the true error") {
    // Polynomials, Gaussians and Gaussian-weighted cosines with known integrals.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int honest = 0;
    const int cases = 100;
    for (int i = 0; i < cases; ++i) {
        double exact = 0.0;
        QuadratureSpec s;
        s.tol = 1e-9;
        switch (i % 3) {
            case 0: {
                const int n = 1 + static_cast<int>(8 * u(rng));
                const double hi = 0.5 + 2.0 * u(rng);
                s.integrand = [n](double x) { return cd(std::pow(x, n)); };
                s.lo = 0.0;
                s.hi = hi;
                exact = std::pow(hi, n + 1) / (n + 1);
                break;
            }
            case 1: {
                const double a = 0.2 + 3.0 * u(rng);
                s.integrand = [a](double x) { return cd(std::exp(-a * x * x)); };
                s.lo = -40.0;
                s.hi = 40.0;
                exact = std::sqrt(std::numbers::pi / a);
                break;
            }
            default: {
                const double a = 0.2 + 3.0 * u(rng);
                const double k = 10.0 * u(rng);
                s.integrand = [a, k](double x) { return cd(std::exp(-a * x * x) * std::cos(k * x)); };
                s.lo = -40.0;
                s.hi = 40.0;
                exact = std::sqrt(std::numbers::pi / a) * std::exp(-k * k / (4.0 * a));
                break;
            }
        }
        const QuadratureResult r = integrate(s);
        if (std::abs(r.value - exact) <= r.error_estimate + 1e-15) ++honest;
    }
    CHECK(honest >= 99);
}

TEST_CASE("linearity") {
    const auto f = [](double x) { return std::exp(-x * x) * std::polar(1.0, 3.0 * x) * (1.0 + x * x); };
    const cd c(2.5, -1.5);
    const QuadratureResult base = integrate(spec(f, -9.0, 9.0, 1e-12));
    const QuadratureResult scaled = integrate(spec([&](double x) { return c * f(x); }, -9.0, 9.0, 1e-12));
    CHECK(std::abs(scaled.value - c * base.value) < 1e-11);
}

TEST_CASE("failure modes") {
    CHECK_THROWS_AS(integrate(spec([](double) { return cd(std::nan("")); }, 0.0, 1.0)), std::domain_error);
    CHECK_THROWS_AS(integrate(spec([](double x) { return cd(x); }, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(integrate(spec([](double x) { return cd(x); }, 0.0, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(integrate(QuadratureSpec{}), std::invalid_argument);

    QuadratureSpec tight = spec([](double x) { return cd(std::sin(200.0 * x) / (x + 1e-3)); }, 0.0, 10.0, 1e-14);
    tight.max_evals = 300;
    const QuadratureResult r = integrate(tight);
    CHECK(r.status == QuadratureStatus::BudgetExhausted);
    CHECK(r.error_estimate > 0.0);
    CHECK(r.evaluations <= 300);
}

TEST_CASE("trapezoid refinement") {
    const auto f = [](double x) { return std::exp(-x * x); };
    const auto r = refine_trapezoid(f, -12.0, 12.0, 1e-15, 1e-14, 1 << 16);
    CHECK(r.converged());
    CHECK(std::abs(r.value - sqrt_pi) < 1e-13);
}
