#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace bellchsh {

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Box-constrained maximization problem.
///
/// `initial_points` are extra starts tried before the low-discrepancy seeds;
/// they count against `seed_count`'s share of the budget like any other start.
struct OptimizationProblem {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    Objective objective;
    int seed_count = 64;
    std::size_t budget = 64 * 2000;
    double tolerance = 1e-10;
    std::vector<Eigen::VectorXd> initial_points;

    Eigen::Index dimension() const { return lower.size(); }
    std::size_t start_count() const { return initial_points.size() + static_cast<std::size_t>(seed_count); }

    /// Throws std::invalid_argument when the type invariants do not hold.
    void validate() const;
};

struct SeedOutcome {
    Eigen::VectorXd start;
    Eigen::VectorXd point;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct OptimizationReport {
    Eigen::VectorXd best_point;
    double best_value = 0.0;
    std::size_t evaluations_used = 0;
    std::vector<SeedOutcome> seed_results;

    bool all_converged() const;
    std::size_t converged_count() const;
};

/// Multistart Nelder-Mead maximization. Starts are the explicit initial points
/// followed by a Halton sequence under a Cranley-Patterson shift drawn from
/// `rng_seed`; identical inputs give bit-identical reports.
OptimizationReport maximize(const OptimizationProblem& problem, std::uint64_t rng_seed);

/// Exhaustive lattice evaluation with `steps_per_dim` points per axis, both
/// box faces included. Limited to five dimensions.
OptimizationReport grid_scan(const OptimizationProblem& problem, int steps_per_dim);

/// Point `index` of the Halton sequence in [0,1)^dim, shifted modulo 1.
Eigen::VectorXd halton_point(std::uint64_t index, const Eigen::VectorXd& shift);

/// Radical inverse of `index` in `base`.
double radical_inverse(std::uint64_t index, unsigned base);

/// Lexicographic order on points of equal size, used to break value ties.
bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace bellchsh
