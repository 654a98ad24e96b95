#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellchsh/angular.hpp"
#include "bellchsh/optimizer.hpp"
#include "bellchsh/weyl.hpp"

#include <cmath>
#include <numbers>

using namespace bellchsh;

namespace {

OptimizationProblem bowl() {
    OptimizationProblem p;
    p.lower = Eigen::VectorXd::Zero(2);
    p.upper = Eigen::VectorXd::Ones(2);
    p.objective = [](const Eigen::VectorXd& x) { return -(x.array() - 0.5).square().sum(); };
    p.seed_count = 8;
    p.budget = 8 * 2000;
    return p;
}

bool inside(const OptimizationProblem& p, const Eigen::VectorXd& x) {
    return (x.array() >= p.lower.array()).all() && (x.array() <= p.upper.array()).all();
}

bool same(const OptimizationReport& a, const OptimizationReport& b) {
    if (a.best_value != b.best_value || a.best_point != b.best_point || a.evaluations_used != b.evaluations_used ||
        a.seed_results.size() != b.seed_results.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.seed_results.size(); ++i) {
        const SeedOutcome& x = a.seed_results[i];
        const SeedOutcome& y = b.seed_results[i];
        if (x.point != y.point || x.value != y.value || x.start != y.start || x.evaluations != y.evaluations ||
            x.converged != y.converged) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("quadratic bowl") {
    const OptimizationProblem p = bowl();
    const OptimizationReport r = maximize(p, 0);
    CHECK((r.best_point.array() - 0.5).abs().maxCoeff() < 1e-4);
    CHECK(std::abs(r.best_value) < 1e-8);
    CHECK(r.seed_results.size() == 8);
    CHECK(r.all_converged());
    CHECK(r.best_value == doctest::Approx(p.objective(r.best_point)).epsilon(1e-12));
}

TEST_CASE("determinism and box respect") {
    OptimizationProblem p = bowl();
    p.objective = [](const Eigen::VectorXd& x) { return std::sin(7.0 * x[0]) * std::cos(5.0 * x[1]) + x[0]; };
    const OptimizationReport a = maximize(p, 42);
    const OptimizationReport b = maximize(p, 42);
    CHECK(same(a, b));
    CHECK(inside(p, a.best_point));
    for (const SeedOutcome& s : a.seed_results) {
        CHECK(inside(p, s.point));
        CHECK(inside(p, s.start));
    }
    std::size_t total = 1;
    for (const SeedOutcome& s : a.seed_results) total += s.evaluations;
    CHECK(total == a.evaluations_used);
    CHECK(a.evaluations_used <= p.budget + 1);
}

TEST_CASE("maximum on a box face is clamped") {
    OptimizationProblem p = bowl();
    p.objective = [](const Eigen::VectorXd& x) { return x[0] + x[1]; };
    const OptimizationReport r = maximize(p, 1);
    CHECK(r.best_value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(inside(p, r.best_point));
}

TEST_CASE("flat and non-finite objectives do not break the search") {
    OptimizationProblem p = bowl();
    p.objective = [](const Eigen::VectorXd&) { return 1.0; };
    const OptimizationReport flat = maximize(p, 0);
    CHECK(flat.best_value == 1.0);
    CHECK(inside(p, flat.best_point));

    p.objective = [](const Eigen::VectorXd& x) { return x[0] > 0.7 ? std::nan("") : x[0]; };
    const OptimizationReport nan = maximize(p, 0);
    CHECK(std::isfinite(nan.best_value));
    CHECK(nan.best_value <= 0.7);
}

TEST_CASE("budget exhaustion marks seeds as not converged") {
    OptimizationProblem p = bowl();
    p.objective = [](const Eigen::VectorXd& x) { return -std::pow(x[0] - 0.3, 2) - 100.0 * std::pow(x[1] - x[0] * x[0], 2); };
    p.seed_count = 4;
    p.budget = 4 * 3;
    const OptimizationReport r = maximize(p, 0);
    CHECK_FALSE(r.all_converged());
    CHECK(r.converged_count() < r.seed_results.size());
}

TEST_CASE("invariants are enforced") {
    OptimizationProblem p = bowl();
    p.budget = 5;
    CHECK_THROWS_AS(maximize(p, 0), std::invalid_argument);
    p = bowl();
    p.lower[0] = 1.0;
    CHECK_THROWS_AS(maximize(p, 0), std::invalid_argument);
    p = bowl();
    p.objective = nullptr;
    CHECK_THROWS_AS(maximize(p, 0), std::invalid_argument);
    p = bowl();
    p.initial_points = {Eigen::VectorXd::Zero(3)};
    CHECK_THROWS_AS(maximize(p, 0), std::invalid_argument);
}

TEST_CASE("grid scan") {
    OptimizationProblem p = bowl();
    const OptimizationReport g = grid_scan(p, 11);
    CHECK(g.best_point.isApprox(Eigen::Vector2d(0.5, 0.5)));
    CHECK(g.evaluations_used >= 121);
    CHECK(maximize(p, 0).best_value >= g.best_value - p.tolerance);

    OptimizationProblem signs;
    signs.lower = Eigen::VectorXd::Constant(4, -1.0);
    signs.upper = Eigen::VectorXd::Constant(4, 1.0);
    signs.objective = [](const Eigen::VectorXd& x) {
        return std::abs((x[0] + x[1]) * x[2] + (x[0] - x[1]) * x[3]);
    };
    signs.seed_count = 1;
    signs.budget = 100;
    CHECK(grid_scan(signs, 2).best_value == 2.0);

    OptimizationProblem big = bowl();
    big.lower = Eigen::VectorXd::Zero(6);
    big.upper = Eigen::VectorXd::Ones(6);
    big.budget = 1 << 20;
    CHECK_THROWS_AS(grid_scan(big, 3), std::invalid_argument);
    CHECK_THROWS_AS(grid_scan(p, 1), std::invalid_argument);
}

TEST_CASE("angle scan stays within the lattice of 2 sqrt 2") {
    OptimizationProblem p;
    p.lower = Eigen::VectorXd::Zero(4);
    p.upper = Eigen::VectorXd::Constant(4, 2.0 * std::numbers::pi);
    p.objective = [](const Eigen::VectorXd& x) { return angular_chsh(AngularSetting(x[0], x[1], x[2], x[3])); };
    p.seed_count = 16;
    p.budget = 16 * 4000;
    p.tolerance = 1e-12;
    const OptimizationReport g = grid_scan(p, 33);
    const OptimizationReport m = maximize(p, 0);
    CHECK(g.best_value <= 2.0 * std::numbers::sqrt2 + 1e-12);
    CHECK(g.best_value > 2.8);
    CHECK(std::abs(m.best_value - 2.0 * std::numbers::sqrt2) < 1e-6);
    CHECK(m.best_value >= g.best_value - p.tolerance);
}

TEST_CASE("Weyl objective reaches the published floor") {
    const OptimizationReport r = maximize(weyl_problem(WeylSearch::standard()), 0);
    CHECK(r.best_value >= 2.184);
    CHECK(r.best_value <= 2.0 * std::numbers::sqrt2 + 1e-9);
}

TEST_CASE("Halton points") {
    CHECK(radical_inverse(1, 2) == 0.5);
    CHECK(radical_inverse(3, 2) == 0.75);
    CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3.0));
    const Eigen::VectorXd h = halton_point(5, Eigen::VectorXd::Zero(3));
    CHECK(h[0] == 0.625);
    CHECK(((h.array() >= 0.0) && (h.array() < 1.0)).all());
    const Eigen::VectorXd shifted = halton_point(5, Eigen::VectorXd::Constant(3, 0.5));
    CHECK(shifted[0] == doctest::Approx(0.125));
    CHECK(lexicographically_less(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 2)));
    CHECK_FALSE(lexicographically_less(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2)));
}
