#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>

// The two standard integrals
//   I1(a,b,c)   = ∫ e^{-ax²} e^{-a(x+c)²} e^{ibx} dx
//   I2(a,b,c,d) = ∫ e^{-ax²} e^{-a(x+c)²} e^{ibx} (x²-d²)((x+c)²-d²) dx
// over the real line.

namespace bellchsh {

template <typename Scalar>
struct GaussianIntegralArgsT {
    Scalar a{1};
    Scalar b{};
    Scalar c{};
    Scalar d{};

    GaussianIntegralArgsT() = default;
    GaussianIntegralArgsT(Scalar a_, Scalar b_, Scalar c_, Scalar d_ = Scalar(0)) : a(a_), b(b_), c(c_), d(d_) {
        using std::isfinite;
        if (!isfinite(a) || !isfinite(b) || !isfinite(c) || !isfinite(d)) {
            throw std::invalid_argument("GaussianIntegralArgs: arguments must be finite");
        }
        if (!(a > Scalar(0))) throw std::invalid_argument("GaussianIntegralArgs: a must be positive");
        if (d < Scalar(0)) throw std::invalid_argument("GaussianIntegralArgs: d must be nonnegative");
    }
};

using GaussianIntegralArgs = GaussianIntegralArgsT<double>;

/// Closed-form value. Magnitudes below 1e-300 come back as exact zero with
/// `underflow` set.
template <typename Scalar>
struct ClosedFormT {
    std::complex<Scalar> value;
    bool underflow = false;
};

using ClosedForm = ClosedFormT<double>;

namespace detail {

template <typename Scalar>
std::complex<Scalar> gaussian_prefactor(const GaussianIntegralArgsT<Scalar>& g) {
    using std::exp;
    using std::sqrt;
    const Scalar magnitude = sqrt(std::numbers::pi_v<Scalar> / (Scalar(2) * g.a)) *
                             exp(-g.b * g.b / (Scalar(8) * g.a) - g.a * g.c * g.c / Scalar(2));
    return std::polar(magnitude, -g.b * g.c / Scalar(2));
}

template <typename Scalar>
ClosedFormT<Scalar> flush_underflow(std::complex<Scalar> v) {
    if (std::abs(v) < Scalar(1e-300)) return {std::complex<Scalar>{}, true};
    return {v, false};
}

}  // namespace detail

/// Fully expanded polynomial factor of I2 relative to I1.
template <typename Scalar>
Scalar i2_polynomial(const GaussianIntegralArgsT<Scalar>& g) {
    const Scalar a = g.a, b2 = g.b * g.b, c2 = g.c * g.c, d2 = g.d * g.d;
    const Scalar a2 = a * a;
    return Scalar(3) / (Scalar(16) * a2) - d2 / (Scalar(2) * a) + d2 * d2 -
           Scalar(3) * b2 / (Scalar(32) * a2 * a) + b2 * b2 / (Scalar(256) * a2 * a2) +
           b2 * d2 / (Scalar(8) * a2) + b2 * c2 / (Scalar(32) * a2) - c2 / (Scalar(8) * a) -
           c2 * d2 / Scalar(2) + c2 * c2 / Scalar(16);
}

/// Same polynomial grouped around (c²/4 + d²).
template <typename Scalar>
Scalar i2_polynomial_grouped(const GaussianIntegralArgsT<Scalar>& g) {
    const Scalar a = g.a, b2 = g.b * g.b, c2 = g.c * g.c, d2 = g.d * g.d;
    const Scalar a2 = a * a;
    const Scalar shift = c2 / Scalar(4) + d2;
    return Scalar(3) / (Scalar(16) * a2) - Scalar(3) * b2 / (Scalar(32) * a2 * a) +
           b2 * b2 / (Scalar(256) * a2 * a2) + shift * (b2 / (Scalar(8) * a2) - Scalar(1) / (Scalar(2) * a)) +
           shift * shift - d2 * c2;
}

/// √(π/2a) e^{-b²/8a} e^{-ac²/2} e^{-ibc/2}
template <typename Scalar>
ClosedFormT<Scalar> i1_closed(const GaussianIntegralArgsT<Scalar>& g) {
    return detail::flush_underflow(detail::gaussian_prefactor(g));
}

template <typename Scalar>
ClosedFormT<Scalar> i2_closed(const GaussianIntegralArgsT<Scalar>& g) {
    return detail::flush_underflow(detail::gaussian_prefactor(g) * i2_polynomial(g));
}

/// Requested accuracy of a quadrature oracle.
struct Tolerance {
    enum class Kind { Absolute, Relative };
    Kind kind = Kind::Absolute;
    double value = 1e-10;

    static Tolerance absolute(double v) { return {Kind::Absolute, v}; }
    static Tolerance relative(double v) { return {Kind::Relative, v}; }
};

struct OracleValue {
    std::complex<double> value;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;          ///< the requested tolerance was met
    bool extended_precision = false; ///< cancellation forced the multiprecision pass
    bool underflow = false;

    double relative_error() const {
        const double m = std::abs(value);
        return m > 0.0 ? error_estimate / m : std::numeric_limits<double>::infinity();
    }
};

/// Direct quadrature of the defining integrals over the window centred on -c/2
/// with half-width √(ln(10/tol)/a) + |c| + |d| + 10. In relative mode a double
/// pass that cannot resolve the result (oscillatory cancellation) is repeated
/// with 200-digit arithmetic. Throws std::invalid_argument on tol <= 0.
OracleValue i1_quadrature(const GaussianIntegralArgs& args, Tolerance tol);
OracleValue i2_quadrature(const GaussianIntegralArgs& args, Tolerance tol);

}  // namespace bellchsh
