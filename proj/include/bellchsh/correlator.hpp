#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace bellchsh {

inline constexpr double kClassicalBound = 2.0;
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;
/// Absolute slack used for every comparison against a bound.
inline constexpr double kBoundTolerance = 1e-9;

/// Ordered from weakest to strongest; comparisons on the underlying value are meaningful.
enum class Classification {
    WithinClassical,
    ExceedsClassicalOnly,  ///< above the classical bound by no more than kBoundTolerance
    Violation,
    ExceedsTsirelson,
};

std::string_view to_string(Classification c);

/// The four pair expectations <AB>, <A'B>, <AB'>, <A'B'>.
template <typename Scalar>
struct CorrelatorQuadT {
    std::complex<Scalar> ab;
    std::complex<Scalar> apb;
    std::complex<Scalar> abp;
    std::complex<Scalar> apbp;

    /// Expectations of products of unitaries in a normalized state lie in the unit disk.
    bool within_unit_disk(Scalar slack = Scalar(1e-12)) const {
        const Scalar limit = Scalar(1) + slack;
        return std::abs(ab) <= limit && std::abs(apb) <= limit && std::abs(abp) <= limit &&
               std::abs(apbp) <= limit;
    }

    bool all_real(Scalar slack) const {
        return std::abs(ab.imag()) <= slack && std::abs(apb.imag()) <= slack &&
               std::abs(abp.imag()) <= slack && std::abs(apbp.imag()) <= slack;
    }

    CorrelatorQuadT operator+(const CorrelatorQuadT& o) const {
        return {ab + o.ab, apb + o.apb, abp + o.abp, apbp + o.apbp};
    }
};

using CorrelatorQuad = CorrelatorQuadT<double>;

/// <AB> + <A'B> + <AB'> - <A'B'>
template <typename Scalar>
std::complex<Scalar> chsh_combine(const CorrelatorQuadT<Scalar>& q) {
    return q.ab + q.apb + q.abp - q.apbp;
}

struct ChshResult {
    std::complex<double> value;
    double magnitude = 0.0;
    Classification classification = Classification::WithinClassical;
    double classical_bound_used = kClassicalBound;

    bool is_violation() const { return classification == Classification::Violation; }
};

/// Real-valued correlators keep the classical bound at 2; generic unitary
/// correlators raise it to 2√2.
ChshResult classify(std::complex<double> value, bool real_constrained);

/// Four commuting phases (e^{iα}, e^{iα'}) and (e^{iβ}, e^{iβ'}).
template <typename Scalar>
struct PhaseSettingT {
    Scalar alpha{};
    Scalar alpha_prime{};
    Scalar beta{};
    Scalar beta_prime{};

    PhaseSettingT() = default;
    PhaseSettingT(Scalar a, Scalar ap, Scalar b, Scalar bp)
        : alpha(a), alpha_prime(ap), beta(b), beta_prime(bp) {
        using std::isfinite;
        if (!isfinite(a) || !isfinite(ap) || !isfinite(b) || !isfinite(bp)) {
            throw std::invalid_argument("PhaseSetting: angles must be finite");
        }
    }
};

using PhaseSetting = PhaseSettingT<double>;

template <typename Scalar>
std::complex<Scalar> unitary_phase_chsh(const PhaseSettingT<Scalar>& s) {
    const auto u = [](Scalar angle) { return std::polar(Scalar(1), angle); };
    return (u(s.alpha) + u(s.alpha_prime)) * u(s.beta) +
           (u(s.alpha) - u(s.alpha_prime)) * u(s.beta_prime);
}

/// Triangle-inequality envelope of |Z| at fixed α - α' = delta.
template <typename Scalar>
Scalar unitary_phase_envelope(Scalar delta) {
    using std::cos;
    using std::sqrt;
    const Scalar c = cos(delta);
    return std::numbers::sqrt2_v<Scalar> * (sqrt(Scalar(1) + c) + sqrt(Scalar(1) - c));
}

/// Exhaustive maximum of |(a+a')b + (a-a')b'| over the 16 sign assignments.
double dichotomic_classical_max();

struct PhaseScan {
    double max_modulus = 0.0;
    PhaseSetting argmax;
    std::size_t evaluations = 0;
};

/// Lattice scan of |Z| over [0, 2π)^4 at `grid_step`, followed by one simplex
/// refinement pass started from the best lattice point.
PhaseScan unconstrained_phase_max(double grid_step = std::numbers::pi / 64.0);

/// Maximum of |Z| over angle quadruples whose four pair sums α+β, α+β', α'+β,
/// α'+β' are integer multiples of π (every pair product then has zero
/// imaginary part). `grid_step` discretizes the one free angle.
PhaseScan real_constrained_phase_max(double grid_step = std::numbers::pi / 64.0);

}  // namespace bellchsh
