#include "bellchsh/gaussian_integrals.hpp"

#include "bellchsh/quadrature.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>

namespace bellchsh {

namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>,
                                           boost::multiprecision::et_off>;

/// Complex value with a multiprecision real type; std::complex is unspecified
/// for non-arithmetic types.
struct WideComplex {
    Wide re;
    Wide im;

    WideComplex operator+(const WideComplex& o) const { return {re + o.re, im + o.im}; }
    WideComplex operator-(const WideComplex& o) const { return {re - o.re, im - o.im}; }
    WideComplex operator*(const Wide& s) const { return {re * s, im * s}; }
};

Wide quadrature_norm(const WideComplex& v) { return boost::multiprecision::hypot(v.re, v.im); }
bool quadrature_finite(const WideComplex& v) {
    return boost::multiprecision::isfinite(v.re) && boost::multiprecision::isfinite(v.im);
}

constexpr std::size_t kBudget = std::size_t{1} << 20;
// Tails are cut well below anything the 200-digit pass can resolve.
constexpr double kWideTailDigits = 190.0;

enum class Family { I1, I2 };

template <typename Real>
Real polynomial_factor(Family family, const Real& x, const Real& c, const Real& d) {
    if (family == Family::I1) return Real(1);
    const Real d2 = d * d;
    const Real shifted = x + c;
    return (x * x - d2) * (shifted * shifted - d2);
}

struct Window {
    double lo;
    double hi;
};

/// Centred on -c/2, half-width √(ln(10/t)/a) + |c| + |d| + 10.
Window window(const GaussianIntegralArgs& g, double t) {
    const double half = std::sqrt(std::log(10.0 / t) / g.a) + std::abs(g.c) + g.d + 10.0;
    const double center = -g.c / 2.0;
    return {center - half, center + half};
}

std::complex<double> integrand(Family family, const GaussianIntegralArgs& g, double x) {
    const double s = x + g.c;
    return std::exp(-g.a * x * x - g.a * s * s) * std::polar(1.0, g.b * x) *
           polynomial_factor<double>(family, x, g.c, g.d);
}

/// ∫|f| over a generous window, to put scales on tolerances.
double absolute_mass(Family family, const GaussianIntegralArgs& g) {
    const auto magnitude = [&](double x) { return std::abs(integrand(family, g, x)); };
    // Peak of the Gaussian envelope sits at -c/2; sample around it for a scale.
    const Window probe = window(g, 1e-30);
    double peak = 0.0;
    for (int i = 0; i <= 400; ++i) {
        peak = std::max(peak, magnitude(probe.lo + (probe.hi - probe.lo) * i / 400.0));
    }
    if (peak == 0.0) return 0.0;
    const Window w = window(g, std::max(peak * 1e-20, std::numeric_limits<double>::min()));
    const auto r = integrate_adaptive(magnitude, w.lo, w.hi, peak * 1e-10, kBudget);
    return r.value;
}

OracleValue finish(std::complex<double> value, double error, std::size_t evals, bool converged, bool wide) {
    OracleValue out;
    out.value = value;
    out.error_estimate = error;
    out.evaluations = evals;
    out.converged = converged;
    out.extended_precision = wide;
    if (std::abs(value) < 1e-300) {
        out.value = {};
        out.underflow = true;
    }
    return out;
}

OracleValue wide_pass(Family family, const GaussianIntegralArgs& g, double mass, double rel_tol,
                      std::size_t evals_so_far) {
    const Wide a(g.a), b(g.b), c(g.c), d(g.d);
    const auto f = [&](const Wide& x) {
        const Wide s = x + c;
        const Wide envelope = boost::multiprecision::exp(-a * x * x - a * s * s);
        const Wide poly = polynomial_factor<Wide>(family, x, c, d);
        const Wide phase = b * x;
        return WideComplex{envelope * poly * boost::multiprecision::cos(phase),
                           envelope * poly * boost::multiprecision::sin(phase)};
    };
    const Wide wide_mass(mass);
    const Wide floor = wide_mass * boost::multiprecision::pow(Wide(10), -(kWideTailDigits + 5.0));
    // Window half-width from the same formula with the tail target 10^-190 * mass.
    const double log_t = std::log(std::max(mass, 1e-300)) - kWideTailDigits * std::log(10.0);
    const double half = std::sqrt((std::log(10.0) - log_t) / g.a) + std::abs(g.c) + g.d + 10.0;
    const Wide lo(-g.c / 2.0 - half), hi(-g.c / 2.0 + half);

    const auto r = refine_trapezoid(f, lo, hi, floor, Wide(rel_tol / 4.0), kBudget - evals_so_far);
    const std::complex<double> value(static_cast<double>(r.value.re), static_cast<double>(r.value.im));
    const double error = static_cast<double>(r.error_estimate);
    const bool ok = r.converged() && error <= rel_tol * std::abs(value);
    return finish(value, error, evals_so_far + r.evaluations, ok, true);
}

OracleValue oracle(Family family, const GaussianIntegralArgs& g, Tolerance tol) {
    if (!(tol.value > 0.0)) throw std::invalid_argument("gaussian quadrature: tol must be positive");
    const auto f = [&](double x) { return integrand(family, g, x); };

    if (tol.kind == Tolerance::Kind::Absolute) {
        const Window w = window(g, tol.value);
        const auto r = integrate_adaptive(f, w.lo, w.hi, tol.value, kBudget);
        return finish(r.value, r.error_estimate, r.evaluations, r.converged(), false);
    }

    const double mass = absolute_mass(family, g);
    if (mass == 0.0) return finish({}, 0.0, 0, true, false);
    // Just above the double rounding floor of the panel sums.
    const double abs_tol = 1e-13 * mass;
    const Window w = window(g, abs_tol);
    const auto r = integrate_adaptive(f, w.lo, w.hi, abs_tol, kBudget);
    if (r.status != QuadratureStatus::BudgetExhausted && r.error_estimate <= tol.value * std::abs(r.value)) {
        return finish(r.value, r.error_estimate, r.evaluations, true, false);
    }
    return wide_pass(family, g, mass, tol.value, r.evaluations);
}

}  // namespace

OracleValue i1_quadrature(const GaussianIntegralArgs& args, Tolerance tol) {
    return oracle(Family::I1, args, tol);
}

OracleValue i2_quadrature(const GaussianIntegralArgs& args, Tolerance tol) {
    return oracle(Family::I2, args, tol);
}

}  // namespace bellchsh
