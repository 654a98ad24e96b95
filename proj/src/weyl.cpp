#include "bellchsh/weyl.hpp"

#include <algorithm>

namespace bellchsh {

namespace {

double chsh_from_norms(const std::array<double, 4>& n) {
    return weyl_vacuum_expectation(n[0]) + weyl_vacuum_expectation(n[1]) + weyl_vacuum_expectation(n[2]) -
           weyl_vacuum_expectation(n[3]);
}

/// Objective on raw parameters; skips the setting invariants so that pinned
/// boundary values such as λ = 0 can be explored.
double raw_chsh(const Eigen::VectorXd& x) {
    const auto g = gram_from_spectral(x[0], x[1], x[2]);
    return chsh_from_norms({combined_norm_sq(g, WeylPair::F_JF, x[3]), combined_norm_sq(g, WeylPair::Fp_JF, x[3]),
                            combined_norm_sq(g, WeylPair::F_JFp, x[4]),
                            combined_norm_sq(g, WeylPair::Fp_JFp, x[4])});
}

}  // namespace

ChshResult chsh_weyl(const WeylSetting& s) { return classify(chsh_from_norms(weyl_norms(s)), true); }

bool tsirelson_ceiling(const ChshResult& r) { return r.magnitude <= kTsirelsonBound + kBoundTolerance; }

WeylSetting reference_weyl_setting() { return {0.001, 0.511, 0.974, 0.227, 0.892}; }

WeylSearch WeylSearch::standard() {
    WeylSearch s;
    s.lower.resize(5);
    s.upper.resize(5);
    s.lower << 1e-6, 1e-6, 1e-6, -2.0, -2.0;
    s.upper << 2.0, 2.0, 1.0 - 1e-6, 2.0, 2.0;
    return s;
}

Eigen::VectorXd to_vector(const WeylSetting& s) {
    Eigen::VectorXd v(5);
    v << s.eta, s.eta_prime, s.lambda, s.a, s.b;
    return v;
}

OptimizationProblem weyl_problem(const WeylSearch& search) {
    OptimizationProblem p;
    p.lower = search.lower;
    p.upper = search.upper;
    p.seed_count = search.seed_count;
    p.budget = search.budget;
    p.tolerance = search.tolerance;
    p.initial_points = search.initial_points;
    p.objective = [](const Eigen::VectorXd& x) { return std::abs(raw_chsh(x)); };
    p.validate();
    if (p.dimension() != 5) throw std::invalid_argument("weyl_problem: box must be five-dimensional");
    if (p.lower[0] < 0.0 || p.lower[1] < 0.0 || p.lower[2] < 0.0 || p.upper[2] > 1.0) {
        throw std::invalid_argument("weyl_problem: need eta, eta' >= 0 and lambda in [0, 1]");
    }
    return p;
}

WeylMaximum maximize_weyl(const WeylSearch& search, std::uint64_t rng_seed) {
    const WeylSearch standard = WeylSearch::standard();
    if (search.lower.size() != 5 || search.upper.size() != 5 ||
        (search.lower.array() > standard.lower.array()).any() ||
        (search.upper.array() < standard.upper.array()).any()) {
        throw std::invalid_argument("maximize_weyl: box must contain eta, eta' in (0, 2], lambda in (0, 1), a, b in [-2, 2]");
    }

    WeylMaximum out;
    out.report = maximize(weyl_problem(search), rng_seed);
    const Eigen::VectorXd& x = out.report.best_point;
    // The search box may touch the open ends of the setting invariants.
    const double lambda = std::clamp(x[2], 1e-12, 1.0 - 1e-12);
    out.setting = WeylSetting(std::max(x[0], 1e-300), std::max(x[1], 1e-300), lambda, x[3], x[4]);
    out.result = chsh_weyl(out.setting);

    const SeedOutcome* winner = nullptr;
    for (const SeedOutcome& s : out.report.seed_results) {
        if (winner == nullptr || s.value > winner->value ||
            (s.value == winner->value && lexicographically_less(s.point, winner->point))) {
            winner = &s;
        }
    }
    out.degraded = winner == nullptr || !winner->converged;
    out.tsirelson_ok = tsirelson_ceiling(out.result);
    return out;
}

}  // namespace bellchsh
