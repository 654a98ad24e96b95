#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace bellchsh {

enum class QuadratureStatus {
    Converged,
    BudgetExhausted,
    RoundoffLimited,  ///< an interval became too narrow to bisect before reaching tol
};

template <typename Value, typename Real>
struct QuadratureResultT {
    Value value{};
    Real error_estimate{};
    std::size_t evaluations = 0;
    QuadratureStatus status = QuadratureStatus::Converged;

    bool converged() const { return status == QuadratureStatus::Converged; }
};

using QuadratureResult = QuadratureResultT<std::complex<double>, double>;

inline double quadrature_norm(double v) { return std::abs(v); }
inline double quadrature_norm(const std::complex<double>& v) { return std::abs(v); }
inline bool quadrature_finite(double v) { return std::isfinite(v); }
inline bool quadrature_finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule on [-1, 1].
// Nodes are listed from the endpoint inward; odd indices are the Gauss nodes.
inline constexpr long double kKronrodNodes[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L,
};
inline constexpr long double kKronrodWeights[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L,
};
inline constexpr long double kGaussWeights[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L,
};

template <typename Value>
void require_finite(const Value& v) {
    if (!quadrature_finite(v)) throw std::domain_error("quadrature: integrand returned a non-finite value");
}

template <typename Value, typename Real>
struct Segment {
    Real lo;
    Real hi;
    Value value;
    Real error;
    bool at_roundoff = false;  ///< the error is the rounding floor; bisection cannot help
};

/// One G7-K15 panel. The error is |K15 - G7|, floored at 50 ulps of the
/// panel's ∫|f| so that rules which are exact on the panel still report the
/// rounding in their sum.
template <typename Real, typename Func>
auto kronrod_panel(Func& f, Real lo, Real hi) {
    using Value = std::decay_t<std::invoke_result_t<Func&, Real>>;
    const Real center = (lo + hi) / Real(2);
    const Real half = (hi - lo) / Real(2);
    const Value f0 = f(center);
    require_finite(f0);
    Value kronrod = f0 * Real(kKronrodWeights[7]);
    Value gauss = f0 * Real(kGaussWeights[3]);
    Real mass = quadrature_norm(f0) * Real(kKronrodWeights[7]);
    for (int i = 0; i < 7; ++i) {
        const Real dx = half * Real(kKronrodNodes[i]);
        const Value fl = f(center - dx);
        const Value fr = f(center + dx);
        require_finite(fl);
        require_finite(fr);
        const Value pair = fl + fr;
        kronrod = kronrod + pair * Real(kKronrodWeights[i]);
        mass = mass + (quadrature_norm(fl) + quadrature_norm(fr)) * Real(kKronrodWeights[i]);
        if (i % 2 == 1) gauss = gauss + pair * Real(kGaussWeights[i / 2]);
    }
    kronrod = kronrod * half;
    gauss = gauss * half;
    const Real discrepancy = quadrature_norm(kronrod - gauss);
    const Real floor = Real(50) * std::numeric_limits<Real>::epsilon() * mass * half;
    if (discrepancy <= floor) return Segment<Value, Real>{lo, hi, kronrod, floor, true};
    return Segment<Value, Real>{lo, hi, kronrod, discrepancy, false};
}

}  // namespace detail

/// Adaptive bisection on the interval with the largest G7/K15 discrepancy until
/// the summed discrepancy drops below `tol` (absolute).
template <typename Real, typename Func>
auto integrate_adaptive(Func&& f, Real lo, Real hi, Real tol, std::size_t max_evals)
    -> QuadratureResultT<std::decay_t<std::invoke_result_t<Func&, Real>>, Real> {
    using Value = std::decay_t<std::invoke_result_t<Func&, Real>>;
    using Seg = detail::Segment<Value, Real>;
    constexpr std::size_t kPanelEvals = 15;
    if (!(lo < hi)) throw std::invalid_argument("integrate: require lo < hi");
    if (!(tol > Real(0))) throw std::invalid_argument("integrate: require tol > 0");

    const auto by_error = [](const Seg& a, const Seg& b) { return a.error < b.error; };
    std::priority_queue<Seg, std::vector<Seg>, decltype(by_error)> open(by_error);
    std::vector<Seg> frozen;

    QuadratureResultT<Value, Real> result;
    Seg first = detail::kronrod_panel(f, lo, hi);
    result.evaluations = kPanelEvals;
    Real total_error = first.error;
    open.push(first);

    while (total_error > tol) {
        if (open.empty()) {
            result.status = QuadratureStatus::RoundoffLimited;
            break;
        }
        if (result.evaluations + 2 * kPanelEvals > max_evals) {
            result.status = QuadratureStatus::BudgetExhausted;
            break;
        }
        Seg worst = open.top();
        open.pop();
        const Real mid = (worst.lo + worst.hi) / Real(2);
        if (worst.at_roundoff || !(worst.lo < mid && mid < worst.hi)) {
            frozen.push_back(worst);
            continue;
        }
        Seg left = detail::kronrod_panel(f, worst.lo, mid);
        Seg right = detail::kronrod_panel(f, mid, worst.hi);
        result.evaluations += 2 * kPanelEvals;
        total_error = total_error - worst.error + left.error + right.error;
        open.push(left);
        open.push(right);
    }

    // Exact re-summation avoids drift from the running error total.
    Value value{};
    Real error{};
    bool have = false;
    const auto add = [&](const Seg& s) {
        value = have ? value + s.value : s.value;
        error = error + s.error;
        have = true;
    };
    for (const Seg& s : frozen) add(s);
    while (!open.empty()) {
        add(open.top());
        open.pop();
    }
    result.value = value;
    result.error_estimate = error;
    if (result.status == QuadratureStatus::Converged && error > tol) {
        result.status = QuadratureStatus::RoundoffLimited;
    }
    return result;
}

/// Nested trapezoid refinement: the step is halved (reusing every previous
/// node) until two successive sums agree within max(abs_tol, rel_tol * |T|) on
/// two consecutive levels. Exponentially convergent when the integrand and its
/// derivatives vanish at both ends, as for Gaussian-damped integrands.
template <typename Real, typename Func>
auto refine_trapezoid(Func&& f, Real lo, Real hi, Real abs_tol, Real rel_tol, std::size_t max_evals,
                      std::size_t initial_panels = 16)
    -> QuadratureResultT<std::decay_t<std::invoke_result_t<Func&, Real>>, Real> {
    using Value = std::decay_t<std::invoke_result_t<Func&, Real>>;
    if (!(lo < hi)) throw std::invalid_argument("refine_trapezoid: require lo < hi");
    if (initial_panels == 0) throw std::invalid_argument("refine_trapezoid: need at least one panel");

    QuadratureResultT<Value, Real> result;
    std::size_t panels = initial_panels;
    Real h = (hi - lo) / Real(panels);

    const Value fa = f(lo);
    const Value fb = f(hi);
    detail::require_finite(fa);
    detail::require_finite(fb);
    Value sum = (fa + fb) * Real(0.5);
    for (std::size_t i = 1; i < panels; ++i) {
        const Value v = f(lo + Real(i) * h);
        detail::require_finite(v);
        sum = sum + v;
    }
    result.evaluations = panels + 1;
    Value estimate = sum * h;

    int agreements = 0;
    while (true) {
        if (result.evaluations + panels > max_evals) {
            result.status = QuadratureStatus::BudgetExhausted;
            break;
        }
        const Real half = h / Real(2);
        for (std::size_t i = 0; i < panels; ++i) {
            const Value v = f(lo + half + Real(i) * h);
            detail::require_finite(v);
            sum = sum + v;
        }
        result.evaluations += panels;
        panels *= 2;
        h = half;
        const Value refined = sum * h;
        const Real change = quadrature_norm(refined - estimate);
        estimate = refined;
        result.error_estimate = change;
        const Real target = std::max(abs_tol, rel_tol * quadrature_norm(refined));
        agreements = (change <= target) ? agreements + 1 : 0;
        if (agreements >= 2) break;
    }
    result.value = estimate;
    return result;
}

/// Complex integrand over a finite interval; truncation of infinite ranges is
/// the caller's job.
struct QuadratureSpec {
    std::function<std::complex<double>(double)> integrand;
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-10;
    std::size_t max_evals = std::size_t{1} << 20;
};

QuadratureResult integrate(const QuadratureSpec& spec);

/// Product of two independent 1D integrals. The error combines as
/// |I1| e2 + |I2| e1 + e1 e2.
QuadratureResult integrate_2d_factored(const QuadratureSpec& fx, const QuadratureSpec& fy);

}  // namespace bellchsh
