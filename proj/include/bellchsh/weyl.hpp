#pragma once

#include "bellchsh/correlator.hpp"
#include "bellchsh/optimizer.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

// Reduced QFT model: test functions f, f' with normalizations η, η' taken from
// the spectral subspace of eigenvalue λ², and Bob's functions a·jf, b·jf'.
// Everything is expressed through the Gram data of f, jf, f', jf'.

namespace bellchsh {

template <typename Scalar>
struct WeylSettingT {
    Scalar eta{1};
    Scalar eta_prime{1};
    Scalar lambda{Scalar(0.5)};
    Scalar a{};
    Scalar b{};

    WeylSettingT() = default;
    WeylSettingT(Scalar eta_, Scalar eta_p, Scalar lambda_, Scalar a_, Scalar b_)
        : eta(eta_), eta_prime(eta_p), lambda(lambda_), a(a_), b(b_) {
        using std::isfinite;
        if (!isfinite(eta) || !isfinite(eta_p) || !isfinite(lambda) || !isfinite(a) || !isfinite(b)) {
            throw std::invalid_argument("WeylSetting: parameters must be finite");
        }
        if (!(eta > Scalar(0)) || !(eta_p > Scalar(0))) {
            throw std::invalid_argument("WeylSetting: eta and eta_prime must be positive");
        }
        if (!(lambda > Scalar(0)) || !(lambda < Scalar(1))) {
            throw std::invalid_argument("WeylSetting: lambda must lie in (0, 1)");
        }
    }

    /// (η, a) ↔ (η', b)
    WeylSettingT swapped() const { return {eta_prime, eta, lambda, b, a}; }
};

using WeylSetting = WeylSettingT<double>;

/// ‖f‖², ‖f'‖², <f|jf>, <f'|jf'>. The mixed products <f|jf'> and <f'|jf> vanish.
template <typename Scalar>
struct TestFunctionGramT {
    Scalar norm_f_sq{};
    Scalar norm_fp_sq{};
    Scalar cross_f_jf{};
    Scalar cross_fp_jfp{};
};

using TestFunctionGram = TestFunctionGramT<double>;

template <typename Scalar>
TestFunctionGramT<Scalar> gram_from_spectral(Scalar eta, Scalar eta_prime, Scalar lambda) {
    const Scalar spread = Scalar(1) + lambda * lambda;
    return {eta * eta * spread, eta_prime * eta_prime * spread, Scalar(2) * eta * eta * lambda,
            Scalar(2) * eta_prime * eta_prime * lambda};
}

template <typename Scalar>
TestFunctionGramT<Scalar> gram_from_setting(const WeylSettingT<Scalar>& s) {
    return gram_from_spectral(s.eta, s.eta_prime, s.lambda);
}

/// Alice's function paired with Bob's function.
enum class WeylPair { F_JF, Fp_JF, F_JFp, Fp_JFp };

/// ‖g + c·jh‖² for the pair, expanded in the Gram data (‖jh‖ = ‖h‖).
template <typename Scalar>
Scalar combined_norm_sq(const TestFunctionGramT<Scalar>& g, WeylPair which, Scalar coeff) {
    const Scalar c2 = coeff * coeff;
    switch (which) {
        case WeylPair::F_JF: return g.norm_f_sq * (Scalar(1) + c2) + Scalar(2) * coeff * g.cross_f_jf;
        case WeylPair::Fp_JF: return g.norm_fp_sq + c2 * g.norm_f_sq;
        case WeylPair::F_JFp: return g.norm_f_sq + c2 * g.norm_fp_sq;
        case WeylPair::Fp_JFp: return g.norm_fp_sq * (Scalar(1) + c2) + Scalar(2) * coeff * g.cross_fp_jfp;
    }
    throw std::invalid_argument("combined_norm_sq: unknown pair");
}

/// e^{-‖h‖²/2}. Negative input means the Gram data are inconsistent.
template <typename Scalar>
Scalar weyl_vacuum_expectation(Scalar norm_sq) {
    using std::exp;
    if (norm_sq < Scalar(0)) throw std::domain_error("weyl_vacuum_expectation: negative squared norm");
    return exp(-norm_sq / Scalar(2));
}

/// The four squared norms in CHSH order: f+a·jf, f'+a·jf, f+b·jf', f'+b·jf'.
template <typename Scalar>
std::array<Scalar, 4> weyl_norms(const WeylSettingT<Scalar>& s) {
    const auto g = gram_from_setting(s);
    return {combined_norm_sq(g, WeylPair::F_JF, s.a), combined_norm_sq(g, WeylPair::Fp_JF, s.a),
            combined_norm_sq(g, WeylPair::F_JFp, s.b), combined_norm_sq(g, WeylPair::Fp_JFp, s.b)};
}

template <typename Scalar>
CorrelatorQuadT<Scalar> weyl_correlators(const WeylSettingT<Scalar>& s) {
    const auto n = weyl_norms(s);
    return {weyl_vacuum_expectation(n[0]), weyl_vacuum_expectation(n[1]), weyl_vacuum_expectation(n[2]),
            weyl_vacuum_expectation(n[3])};
}

/// Vacuum correlators are real, so the classical bound is 2.
ChshResult chsh_weyl(const WeylSetting& s);

/// magnitude ≤ 2√2 + 1e-9
bool tsirelson_ceiling(const ChshResult& r);

/// η, η', λ, a, b = 0.001, 0.511, 0.974, 0.227, 0.892
WeylSetting reference_weyl_setting();

struct WeylSearch {
    Eigen::VectorXd lower;  ///< (η, η', λ, a, b)
    Eigen::VectorXd upper;
    int seed_count = 64;
    std::size_t budget = 64 * 3000;
    double tolerance = 1e-12;
    std::vector<Eigen::VectorXd> initial_points;

    /// η, η' ∈ [1e-6, 2], λ ∈ [1e-6, 1 - 1e-6], a, b ∈ [-2, 2].
    static WeylSearch standard();
};

struct WeylMaximum {
    WeylSetting setting;
    ChshResult result;
    OptimizationReport report;
    bool degraded = false;
    bool tsirelson_ok = true;
};

Eigen::VectorXd to_vector(const WeylSetting& s);

/// |chsh_weyl| over the box, without box preconditions. λ may be pinned by
/// a narrow box; λ = 0 is evaluated through the Gram data directly.
OptimizationProblem weyl_problem(const WeylSearch& search);

/// Multistart maximization; the box must contain the standard one.
WeylMaximum maximize_weyl(const WeylSearch& search, std::uint64_t rng_seed);

}  // namespace bellchsh
