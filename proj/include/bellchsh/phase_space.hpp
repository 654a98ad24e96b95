#pragma once

#include "bellchsh/correlator.hpp"
#include "bellchsh/gaussian_integrals.hpp"
#include "bellchsh/optimizer.hpp"
#include "bellchsh/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

// Weyl operators A = e^{iαX₁}, A' = e^{iα'P₁}, B = e^{iβX₂}, B' = e^{iβ'P₂} in
// the two-particle state
//   ψ(x₁,x₂) = N((x₁-x₂)² - 8σ₋²) e^{-(x₁-x₂)²/8σ₋²} e^{-(x₁+x₂)²/8σ₊²}.
// Dimensionless settings: α = a/σ₊, β = b/σ₊, α' = a'σ₋, β' = b'σ₋, r = σ₋/σ₊.

namespace bellchsh {

template <typename Scalar>
struct BellWavefunctionT {
    Scalar sigma_minus{1};
    Scalar sigma_plus{1};
    Scalar norm{};

    BellWavefunctionT(Scalar sm, Scalar sp) : sigma_minus(sm), sigma_plus(sp) {
        using std::isfinite;
        using std::sqrt;
        if (!(sm > Scalar(0)) || !(sp > Scalar(0)) || !isfinite(sm) || !isfinite(sp)) {
            throw std::invalid_argument("BellWavefunction: widths must be positive and finite");
        }
        norm = Scalar(1) / sqrt(normalization_weight());
    }

    /// 4 (2π σ₋ σ₊)(11 σ₋⁴); the state is normalized when norm² times this is 1.
    Scalar normalization_weight() const {
        const Scalar s2 = sigma_minus * sigma_minus;
        return Scalar(4) * Scalar(2) * std::numbers::pi_v<Scalar> * sigma_minus * sigma_plus * Scalar(11) * s2 * s2;
    }

    Scalar normalization_residual() const { return norm * norm * normalization_weight() - Scalar(1); }
};

using BellWavefunction = BellWavefunctionT<double>;

template <typename Scalar>
Scalar psi_value(const BellWavefunctionT<Scalar>& w, Scalar x1, Scalar x2) {
    using std::exp;
    const Scalar rel = x1 - x2;
    const Scalar com = x1 + x2;
    const Scalar sm2 = w.sigma_minus * w.sigma_minus;
    const Scalar sp2 = w.sigma_plus * w.sigma_plus;
    return w.norm * (rel * rel - Scalar(8) * sm2) * exp(-rel * rel / (Scalar(8) * sm2)) *
           exp(-com * com / (Scalar(8) * sp2));
}

template <typename Scalar>
struct PhaseSpaceSettingT {
    Scalar a{};
    Scalar a_prime{};
    Scalar b{};
    Scalar b_prime{};
    Scalar ratio{1};

    PhaseSpaceSettingT() = default;
    PhaseSpaceSettingT(Scalar a_, Scalar ap, Scalar b_, Scalar bp, Scalar r)
        : a(a_), a_prime(ap), b(b_), b_prime(bp), ratio(r) {
        using std::isfinite;
        if (!isfinite(a) || !isfinite(ap) || !isfinite(b) || !isfinite(bp) || !isfinite(r)) {
            throw std::invalid_argument("PhaseSpaceSetting: parameters must be finite");
        }
        if (!(r > Scalar(0))) throw std::invalid_argument("PhaseSpaceSetting: ratio must be positive");
    }

    /// The same setting with Alice and Bob exchanged (a ↔ b, a' ↔ b').
    PhaseSpaceSettingT swapped() const { return {b, b_prime, a, a_prime, ratio}; }
};

using PhaseSpaceSetting = PhaseSpaceSettingT<double>;

enum class CorrelatorPair { AB, ApB, ABp, ApBp };

template <typename Scalar>
Scalar corr_ab(const PhaseSpaceSettingT<Scalar>& s) {
    using std::exp;
    const Scalar r2 = s.ratio * s.ratio;
    const Scalar sum = s.a + s.b;
    const Scalar diff2 = (s.a - s.b) * (s.a - s.b);
    return exp(-sum * sum / Scalar(4)) * exp(-diff2 * r2 / Scalar(4)) *
           (Scalar(1) + diff2 * r2 / Scalar(11) + diff2 * diff2 * r2 * r2 / Scalar(44));
}

/// <A'B>. The a'²b² cross term carries r², and the a'⁴ term is a'⁴/704; both
/// follow from the I1·I2 factorization and agree with direct quadrature.
template <typename Scalar>
Scalar corr_apb(const PhaseSpaceSettingT<Scalar>& s) {
    using std::exp;
    const Scalar r2 = s.ratio * s.ratio;
    const Scalar b2 = s.b * s.b;
    const Scalar ap2 = s.a_prime * s.a_prime;
    return exp(-b2 / Scalar(4)) * exp(-b2 * r2 / Scalar(4)) * exp(-ap2 / Scalar(16)) *
           exp(-ap2 * r2 / Scalar(16)) *
           (Scalar(1) + b2 * r2 / Scalar(11) + b2 * b2 * r2 * r2 / Scalar(44) + b2 * ap2 * r2 / Scalar(88) -
            Scalar(5) * ap2 / Scalar(44) + ap2 * ap2 / Scalar(704));
}

/// <AB'> by exchange symmetry from <A'B>.
template <typename Scalar>
Scalar corr_abp(const PhaseSpaceSettingT<Scalar>& s) {
    return corr_apb(s.swapped());
}

template <typename Scalar>
Scalar corr_apbp(const PhaseSpaceSettingT<Scalar>& s) {
    using std::exp;
    const Scalar r2 = s.ratio * s.ratio;
    const Scalar sum = s.a_prime + s.b_prime;
    const Scalar diff2 = (s.a_prime - s.b_prime) * (s.a_prime - s.b_prime);
    return exp(-sum * sum * r2 / Scalar(16)) * exp(-diff2 / Scalar(16)) *
           (Scalar(1) - Scalar(5) * diff2 / Scalar(44) + diff2 * diff2 / Scalar(704));
}

template <typename Scalar>
Scalar phase_space_correlator(const PhaseSpaceSettingT<Scalar>& s, CorrelatorPair which) {
    switch (which) {
        case CorrelatorPair::AB: return corr_ab(s);
        case CorrelatorPair::ApB: return corr_apb(s);
        case CorrelatorPair::ABp: return corr_abp(s);
        case CorrelatorPair::ApBp: return corr_apbp(s);
    }
    throw std::invalid_argument("phase_space_correlator: unknown pair");
}

template <typename Scalar>
CorrelatorQuadT<Scalar> phase_space_correlators(const PhaseSpaceSettingT<Scalar>& s) {
    return {corr_ab(s), corr_apb(s), corr_abp(s), corr_apbp(s)};
}

/// r → 0 limits of the four correlators.
template <typename Scalar>
Scalar corr_leading(const PhaseSpaceSettingT<Scalar>& s, CorrelatorPair which) {
    using std::exp;
    const auto mixed = [](Scalar phase, Scalar shift) {
        const Scalar p2 = phase * phase;
        const Scalar t2 = shift * shift;
        return exp(-p2 / Scalar(4)) * exp(-t2 / Scalar(16)) *
               (Scalar(1) - Scalar(5) * t2 / Scalar(44) + t2 * t2 / Scalar(704));
    };
    switch (which) {
        case CorrelatorPair::AB: {
            const Scalar sum = s.a + s.b;
            return exp(-sum * sum / Scalar(4));
        }
        case CorrelatorPair::ApB: return mixed(s.b, s.a_prime);
        case CorrelatorPair::ABp: return mixed(s.a, s.b_prime);
        case CorrelatorPair::ApBp: {
            const Scalar d2 = (s.a_prime - s.b_prime) * (s.a_prime - s.b_prime);
            return exp(-d2 / Scalar(16)) * (Scalar(1) - Scalar(5) * d2 / Scalar(44) + d2 * d2 / Scalar(704));
        }
    }
    throw std::invalid_argument("corr_leading: unknown pair");
}

/// Small-parameter CHSH along a = -b, a' = -b': 2 - a²/2 + (31/88)a'².
template <typename Scalar>
Scalar quadratic_chsh_expansion(Scalar a, Scalar a_prime) {
    return Scalar(2) - a * a / Scalar(2) + Scalar(31) * a_prime * a_prime / Scalar(88);
}

/// a'²/a² > 44/31, the sign condition of the quadratic form above. Values
/// within a few ulps of the boundary count as on it. Throws for a = 0.
bool violation_condition(double a, double a_prime);

/// All four correlators are real, so the classical bound stays at 2.
ChshResult chsh_phase_space(const PhaseSpaceSetting& s);

struct PhysicalAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_prime = 0.0;
    double beta_prime = 0.0;
};

/// Rescale a dimensionless setting into the four operator parameters of `w`.
PhysicalAngles physical_angles(const PhaseSpaceSetting& s, const BellWavefunction& w);

/// Wavefunction with σ₋ = 1 and σ₊ = 1/r.
BellWavefunction unit_wavefunction(double ratio);

/// <ψ| e^{iαX₁} e^{iβX₂} T(α', β') |ψ> as the product of the two standard
/// integrals (I1 along x₊, I2 along x₋).
std::complex<double> master_integral_closed(const BellWavefunction& w, double alpha, double beta,
                                            double alpha_p, double beta_p);

/// Correlator for one pair via master_integral_closed.
std::complex<double> correlator_from_integrals(const PhaseSpaceSetting& s, CorrelatorPair which);

/// Factored quadrature of the master integral in the rotated coordinates
/// x± = (x₁ ± x₂)/√2, where the integrand separates. `tol` is absolute.
QuadratureResult master_integral_oracle(const BellWavefunction& w, double alpha, double beta, double alpha_p,
                                        double beta_p, double tol);

/// Quadrature oracle for one pair of a dimensionless setting (σ₋ = 1).
QuadratureResult correlator_oracle(const PhaseSpaceSetting& s, CorrelatorPair which, double tol);

/// ∫∫|ψ|² dx₁dx₂ using psi_value along the two rotated axes.
QuadratureResult normalization_by_quadrature(const BellWavefunction& w, double tol);

struct PhaseSpaceSearch {
    Eigen::VectorXd lower;  ///< (a, a', b, b', r)
    Eigen::VectorXd upper;
    int seed_count = 64;
    std::size_t budget = 64 * 3000;
    double tolerance = 1e-10;
    std::vector<Eigen::VectorXd> initial_points;

    /// |a|, |a'|, |b|, |b'| ≤ 4, r ∈ [0.001, 1].
    static PhaseSpaceSearch standard();
};

struct PhaseSpaceMaximum {
    PhaseSpaceSetting setting;
    ChshResult result;
    OptimizationReport report;
    bool degraded = false;      ///< the winning start did not converge within its budget
    bool tsirelson_ok = true;
};

/// Objective |chsh_phase_space| over (a, a', b, b', r), with no box preconditions.
OptimizationProblem phase_space_problem(const PhaseSpaceSearch& search);

/// Multistart maximization. The box must contain the standard one.
PhaseSpaceMaximum maximize_phase_space(const PhaseSpaceSearch& search, std::uint64_t rng_seed);

}  // namespace bellchsh
