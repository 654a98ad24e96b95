#pragma once

#include "bellchsh/correlator.hpp"
#include "bellchsh/optimizer.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

// Two-dimensional orbital angular momentum: unitaries e^{iαL_A}, e^{iβL_B}
// acting on the singlet-like state (|1,-1> - |-1,1>)/√2 of zero total L.

namespace bellchsh {

template <typename Scalar>
struct AngularSettingT {
    Scalar alpha{};
    Scalar alpha_prime{};
    Scalar beta{};
    Scalar beta_prime{};

    AngularSettingT() = default;
    AngularSettingT(Scalar a, Scalar ap, Scalar b, Scalar bp)
        : alpha(a), alpha_prime(ap), beta(b), beta_prime(bp) {
        using std::isfinite;
        if (!isfinite(a) || !isfinite(ap) || !isfinite(b) || !isfinite(bp)) {
            throw std::invalid_argument("AngularSetting: angles must be finite");
        }
    }
};

using AngularSetting = AngularSettingT<double>;

/// <ψ| e^{iαL_A} e^{iβL_B} |ψ> in closed form.
template <typename Scalar>
Scalar pair_correlator(Scalar alpha, Scalar beta) {
    using std::cos;
    return cos(alpha - beta);
}

/// Same expectation by explicit state-vector arithmetic on the 4-dimensional
/// product basis {|m_A, m_B>}, m = ±1.
double pair_correlator_bruteforce(double alpha, double beta);

/// cos(α-β) + cos(α'-β) + cos(α-β') - cos(α'-β').
template <typename Scalar>
Scalar angular_chsh(const AngularSettingT<Scalar>& s) {
    return pair_correlator(s.alpha, s.beta) + pair_correlator(s.alpha_prime, s.beta) +
           pair_correlator(s.alpha, s.beta_prime) - pair_correlator(s.alpha_prime, s.beta_prime);
}

inline constexpr std::string_view kCommutingRationale =
    "all four unitaries are functions of L_A or L_B alone, so [A,A'] = [B,B'] = 0; "
    "commuting unitaries have classical bound 2*sqrt(2)";

/// Always false: reaching 2√2 here is the classical bound of commuting unitaries.
template <typename Scalar>
bool is_violation(const AngularSettingT<Scalar>&) {
    return false;
}

/// (0, π/2, π/4, 3π/4): the quarter-turn staggered angle set often quoted for
/// this example. It gives 0 for the combination above.
AngularSetting staggered_angles();

/// (0, π/2, π/4, -π/4): attains 2√2.
AngularSetting maximizing_angles();

struct AngularMaximum {
    AngularSetting setting;
    double value = 0.0;
    bool violation = false;
    OptimizationReport report;
};

/// Multistart simplex maximization of angular_chsh over [0, 2π]^4.
AngularMaximum maximize_angular(std::uint64_t rng_seed, int seed_count = 16,
                                std::size_t budget = 16 * 4000, double tolerance = 1e-12);

}  // namespace bellchsh
