#include "bellchsh/phase_space.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bellchsh {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct PairParameters {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_p = 0.0;
    double beta_p = 0.0;
};

PairParameters pair_parameters(const PhysicalAngles& p, CorrelatorPair which) {
    switch (which) {
        case CorrelatorPair::AB: return {p.alpha, p.beta, 0.0, 0.0};
        case CorrelatorPair::ApB: return {0.0, p.beta, p.alpha_prime, 0.0};
        case CorrelatorPair::ABp: return {p.alpha, 0.0, 0.0, p.beta_prime};
        case CorrelatorPair::ApBp: return {0.0, 0.0, p.alpha_prime, p.beta_prime};
    }
    throw std::invalid_argument("unknown correlator pair");
}

}  // namespace

bool violation_condition(double a, double a_prime) {
    if (a == 0.0) throw std::invalid_argument("violation_condition: a must be nonzero");
    if (!std::isfinite(a) || !std::isfinite(a_prime)) {
        throw std::invalid_argument("violation_condition: arguments must be finite");
    }
    const double lhs = 31.0 * a_prime * a_prime;
    const double rhs = 44.0 * a * a;
    return lhs - rhs > 8.0 * std::numeric_limits<double>::epsilon() * rhs;
}

ChshResult chsh_phase_space(const PhaseSpaceSetting& s) {
    const CorrelatorQuad q = phase_space_correlators(s);
    return classify(chsh_combine(q), true);
}

PhysicalAngles physical_angles(const PhaseSpaceSetting& s, const BellWavefunction& w) {
    return {s.a / w.sigma_plus, s.b / w.sigma_plus, s.a_prime * w.sigma_minus, s.b_prime * w.sigma_minus};
}

BellWavefunction unit_wavefunction(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw std::invalid_argument("unit_wavefunction: ratio must be positive and finite");
    }
    return BellWavefunction(1.0, 1.0 / ratio);
}

std::complex<double> master_integral_closed(const BellWavefunction& w, double alpha, double beta,
                                            double alpha_p, double beta_p) {
    const double sp = w.sigma_plus;
    const double sm = w.sigma_minus;
    const GaussianIntegralArgs plus(1.0 / (4.0 * sp * sp), (alpha + beta) / kSqrt2, (alpha_p + beta_p) / kSqrt2);
    const GaussianIntegralArgs minus(1.0 / (4.0 * sm * sm), (alpha - beta) / kSqrt2, (alpha_p - beta_p) / kSqrt2,
                                     2.0 * sm);
    // Unflushed products: a tiny factor times a large one can still be representable.
    const std::complex<double> i1 = detail::gaussian_prefactor(plus);
    const std::complex<double> i2 = detail::gaussian_prefactor(minus) * i2_polynomial(minus);
    return 4.0 * w.norm * w.norm * i1 * i2;
}

std::complex<double> correlator_from_integrals(const PhaseSpaceSetting& s, CorrelatorPair which) {
    const BellWavefunction w = unit_wavefunction(s.ratio);
    const PairParameters p = pair_parameters(physical_angles(s, w), which);
    return master_integral_closed(w, p.alpha, p.beta, p.alpha_p, p.beta_p);
}

QuadratureResult master_integral_oracle(const BellWavefunction& w, double alpha, double beta, double alpha_p,
                                        double beta_p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("master_integral_oracle: tol must be positive");
    // ψ separates as ψ(x₋, x₊) = ψ(x₋ axis) ψ(x₊ axis) / ψ(0, 0).
    const auto on_minus = [&w](double x) { return psi_value(w, x / kSqrt2, -x / kSqrt2); };
    const auto on_plus = [&w](double x) { return psi_value(w, x / kSqrt2, x / kSqrt2); };
    const double origin = psi_value(w, 0.0, 0.0);

    const double b_minus = (alpha - beta) / kSqrt2;
    const double b_plus = (alpha + beta) / kSqrt2;
    const double c_minus = (alpha_p - beta_p) / kSqrt2;
    const double c_plus = (alpha_p + beta_p) / kSqrt2;

    // ∫ψ² along each axis bounds the size of the corresponding factor.
    const double sm = w.sigma_minus;
    const double sp = w.sigma_plus;
    const double root = std::sqrt(2.0 * std::numbers::pi);
    const double scale_minus = w.norm * w.norm * 44.0 * std::pow(sm, 5) * root;
    const double scale_plus = origin * origin * root * sp;
    const double weight = 1.0 / (origin * origin);

    QuadratureSpec minus;
    minus.integrand = [=](double x) { return on_minus(x) * on_minus(x + c_minus) * std::polar(1.0, b_minus * x); };
    minus.lo = -c_minus / 2.0 - std::abs(c_minus) / 2.0 - 16.0 * sm;
    minus.hi = -c_minus / 2.0 + std::abs(c_minus) / 2.0 + 16.0 * sm;
    minus.tol = tol / (3.0 * weight * scale_plus);

    QuadratureSpec plus;
    plus.integrand = [=](double x) { return on_plus(x) * on_plus(x + c_plus) * std::polar(1.0, b_plus * x); };
    plus.lo = -c_plus / 2.0 - std::abs(c_plus) / 2.0 - 16.0 * sp;
    plus.hi = -c_plus / 2.0 + std::abs(c_plus) / 2.0 + 16.0 * sp;
    plus.tol = tol / (3.0 * weight * scale_minus);

    QuadratureResult r = integrate_2d_factored(minus, plus);
    r.value *= weight;
    r.error_estimate *= weight;
    return r;
}

QuadratureResult correlator_oracle(const PhaseSpaceSetting& s, CorrelatorPair which, double tol) {
    const BellWavefunction w = unit_wavefunction(s.ratio);
    const PairParameters p = pair_parameters(physical_angles(s, w), which);
    return master_integral_oracle(w, p.alpha, p.beta, p.alpha_p, p.beta_p, tol);
}

QuadratureResult normalization_by_quadrature(const BellWavefunction& w, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("normalization_by_quadrature: tol must be positive");
    const double origin = psi_value(w, 0.0, 0.0);
    const double weight = 1.0 / (origin * origin);
    const double sm = w.sigma_minus;
    const double sp = w.sigma_plus;

    QuadratureSpec minus;
    minus.integrand = [&w](double x) {
        const double v = psi_value(w, x / kSqrt2, -x / kSqrt2);
        return std::complex<double>(v * v);
    };
    minus.lo = -16.0 * sm;
    minus.hi = 16.0 * sm;
    QuadratureSpec plus;
    plus.integrand = [&w](double x) {
        const double v = psi_value(w, x / kSqrt2, x / kSqrt2);
        return std::complex<double>(v * v);
    };
    plus.lo = -16.0 * sp;
    plus.hi = 16.0 * sp;

    // First pass for the scales, second at the requested accuracy.
    const QuadratureResult coarse_m = integrate(minus);
    const QuadratureResult coarse_p = integrate(plus);
    minus.tol = tol / (3.0 * weight * std::max(std::abs(coarse_p.value), 1e-300));
    plus.tol = tol / (3.0 * weight * std::max(std::abs(coarse_m.value), 1e-300));
    QuadratureResult r = integrate_2d_factored(minus, plus);
    r.value *= weight;
    r.error_estimate *= weight;
    r.evaluations += coarse_m.evaluations + coarse_p.evaluations;
    return r;
}

PhaseSpaceSearch PhaseSpaceSearch::standard() {
    PhaseSpaceSearch s;
    s.lower.resize(5);
    s.upper.resize(5);
    s.lower << -4.0, -4.0, -4.0, -4.0, 0.001;
    s.upper << 4.0, 4.0, 4.0, 4.0, 1.0;
    return s;
}

OptimizationProblem phase_space_problem(const PhaseSpaceSearch& search) {
    OptimizationProblem p;
    p.lower = search.lower;
    p.upper = search.upper;
    p.seed_count = search.seed_count;
    p.budget = search.budget;
    p.tolerance = search.tolerance;
    p.initial_points = search.initial_points;
    p.objective = [](const Eigen::VectorXd& x) {
        return chsh_phase_space(PhaseSpaceSetting(x[0], x[1], x[2], x[3], x[4])).magnitude;
    };
    p.validate();
    if (p.dimension() != 5) throw std::invalid_argument("phase_space_problem: box must be five-dimensional");
    if (!(p.lower[4] > 0.0)) throw std::invalid_argument("phase_space_problem: ratio bound must be positive");
    return p;
}

PhaseSpaceMaximum maximize_phase_space(const PhaseSpaceSearch& search, std::uint64_t rng_seed) {
    const PhaseSpaceSearch standard = PhaseSpaceSearch::standard();
    if (search.lower.size() != 5 || search.upper.size() != 5 ||
        (search.lower.array() > standard.lower.array()).any() ||
        (search.upper.array() < standard.upper.array()).any()) {
        throw std::invalid_argument("maximize_phase_space: box must contain |a|,|a'|,|b|,|b'| <= 4, r in [0.001, 1]");
    }
    if (search.seed_count < 64) throw std::invalid_argument("maximize_phase_space: need at least 64 seeds");

    PhaseSpaceMaximum out;
    out.report = maximize(phase_space_problem(search), rng_seed);
    const Eigen::VectorXd& x = out.report.best_point;
    out.setting = PhaseSpaceSetting(x[0], x[1], x[2], x[3], x[4]);
    out.result = chsh_phase_space(out.setting);

    const SeedOutcome* winner = nullptr;
    for (const SeedOutcome& s : out.report.seed_results) {
        if (winner == nullptr || s.value > winner->value ||
            (s.value == winner->value && lexicographically_less(s.point, winner->point))) {
            winner = &s;
        }
    }
    out.degraded = winner == nullptr || !winner->converged;
    out.tsirelson_ok = out.result.magnitude <= kTsirelsonBound + kBoundTolerance;
    return out;
}

}  // namespace bellchsh
