#include "bellchsh/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace bellchsh {

namespace {

constexpr std::array<unsigned, 12> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Classical Nelder-Mead coefficients.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kInitialStepFraction = 0.1;

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& x, const OptimizationProblem& p) {
    return x.cwiseMax(p.lower).cwiseMin(p.upper);
}

/// Minimizes the negated objective; NaN counts as the worst possible value.
class SimplexRun {
public:
    SimplexRun(const OptimizationProblem& problem, std::size_t budget)
        : problem_(problem), budget_(budget), width_(problem.upper - problem.lower) {}

    std::size_t evaluations() const { return evaluations_; }

    /// Runs from `start` until convergence or budget exhaustion. Returns true on convergence.
    bool run(const Eigen::VectorXd& start) {
        const Eigen::Index n = problem_.dimension();
        vertices_.assign(static_cast<std::size_t>(n + 1), start);
        costs_.assign(static_cast<std::size_t>(n + 1), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::VectorXd& v = vertices_[static_cast<std::size_t>(j + 1)];
            const double step = kInitialStepFraction * width_(j);
            v(j) = (start(j) + step <= problem_.upper(j)) ? start(j) + step : start(j) - step;
            v = clamp_to_box(v, problem_);
        }
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (exhausted()) return false;
            costs_[i] = cost(vertices_[i]);
        }

        while (true) {
            order();
            if (has_converged()) return true;
            if (exhausted()) return false;
            iterate();
        }
    }

    const Eigen::VectorXd& best_point() const { return vertices_.front(); }
    double best_cost() const { return costs_.front(); }

private:
    bool exhausted() const { return evaluations_ >= budget_; }

    double cost(const Eigen::VectorXd& x) {
        ++evaluations_;
        const double f = problem_.objective(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : -f;
    }

    void order() {
        std::vector<std::size_t> idx(vertices_.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return costs_[a] < costs_[b]; });
        std::vector<Eigen::VectorXd> v;
        std::vector<double> c;
        v.reserve(idx.size());
        c.reserve(idx.size());
        for (std::size_t i : idx) {
            v.push_back(vertices_[i]);
            c.push_back(costs_[i]);
        }
        vertices_ = std::move(v);
        costs_ = std::move(c);
    }

    bool has_converged() const {
        const double tol = problem_.tolerance;
        const double spread = costs_.back() - costs_.front();
        if (!(spread <= tol * (1.0 + std::abs(costs_.front())))) return false;
        double diameter = 0.0;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const Eigen::VectorXd d = (vertices_[i] - vertices_.front()).cwiseAbs().cwiseQuotient(width_);
            diameter = std::max(diameter, d.maxCoeff());
        }
        return diameter <= tol;
    }

    void iterate() {
        const std::size_t worst = vertices_.size() - 1;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(problem_.dimension());
        for (std::size_t i = 0; i < worst; ++i) centroid += vertices_[i];
        centroid /= static_cast<double>(worst);

        const Eigen::VectorXd reflected =
            clamp_to_box(centroid + kReflect * (centroid - vertices_[worst]), problem_);
        const double c_reflected = cost(reflected);

        if (c_reflected < costs_.front()) {
            if (exhausted()) return replace(worst, reflected, c_reflected);
            const Eigen::VectorXd expanded =
                clamp_to_box(centroid + kExpand * (centroid - vertices_[worst]), problem_);
            const double c_expanded = cost(expanded);
            if (c_expanded < c_reflected) return replace(worst, expanded, c_expanded);
            return replace(worst, reflected, c_reflected);
        }
        if (c_reflected < costs_[worst - 1]) return replace(worst, reflected, c_reflected);
        if (exhausted()) return;

        if (c_reflected < costs_[worst]) {
            const Eigen::VectorXd outside =
                clamp_to_box(centroid + kContract * (reflected - centroid), problem_);
            const double c_outside = cost(outside);
            if (c_outside <= c_reflected) return replace(worst, outside, c_outside);
        } else {
            const Eigen::VectorXd inside =
                clamp_to_box(centroid + kContract * (vertices_[worst] - centroid), problem_);
            const double c_inside = cost(inside);
            if (c_inside < costs_[worst]) return replace(worst, inside, c_inside);
        }
        shrink();
    }

    void replace(std::size_t i, const Eigen::VectorXd& x, double c) {
        vertices_[i] = x;
        costs_[i] = c;
    }

    void shrink() {
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            if (exhausted()) return;
            vertices_[i] = vertices_.front() + kShrink * (vertices_[i] - vertices_.front());
            costs_[i] = cost(vertices_[i]);
        }
    }

    const OptimizationProblem& problem_;
    std::size_t budget_;
    Eigen::VectorXd width_;
    std::size_t evaluations_ = 0;
    std::vector<Eigen::VectorXd> vertices_;
    std::vector<double> costs_;
};

/// Best value wins; equal values go to the lexicographically smaller point.
bool better(double value, const Eigen::VectorXd& point, double best_value,
            const Eigen::VectorXd& best_point) {
    if (value != best_value) return value > best_value;
    return lexicographically_less(point, best_point);
}

Eigen::VectorXd shift_from_seed(std::uint64_t rng_seed, Eigen::Index dim) {
    std::mt19937_64 engine(rng_seed);
    Eigen::VectorXd shift(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        // 53 random mantissa bits; avoids implementation-defined distributions.
        shift(j) = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }
    return shift;
}

}  // namespace

void OptimizationProblem::validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) {
        throw std::invalid_argument("OptimizationProblem: bounds must be non-empty and of equal size");
    }
    if (!(lower.array() < upper.array()).all()) {
        throw std::invalid_argument("OptimizationProblem: lower < upper must hold componentwise");
    }
    if (!lower.allFinite() || !upper.allFinite()) {
        throw std::invalid_argument("OptimizationProblem: bounds must be finite");
    }
    if (!objective) throw std::invalid_argument("OptimizationProblem: objective is empty");
    if (seed_count < 0 || start_count() == 0) {
        throw std::invalid_argument("OptimizationProblem: need at least one start");
    }
    if (budget < start_count() * static_cast<std::size_t>(dimension() + 1)) {
        throw std::invalid_argument("OptimizationProblem: budget < starts * (dimension + 1)");
    }
    if (!(tolerance > 0.0)) throw std::invalid_argument("OptimizationProblem: tolerance must be positive");
    for (const auto& p : initial_points) {
        if (p.size() != dimension()) {
            throw std::invalid_argument("OptimizationProblem: initial point has wrong dimension");
        }
    }
}

bool OptimizationReport::all_converged() const {
    return std::all_of(seed_results.begin(), seed_results.end(),
                       [](const SeedOutcome& s) { return s.converged; });
}

std::size_t OptimizationReport::converged_count() const {
    return static_cast<std::size_t>(std::count_if(seed_results.begin(), seed_results.end(),
                                                  [](const SeedOutcome& s) { return s.converged; }));
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double result = 0.0;
    double scale = 1.0 / base;
    while (index > 0) {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale /= base;
    }
    return result;
}

Eigen::VectorXd halton_point(std::uint64_t index, const Eigen::VectorXd& shift) {
    if (static_cast<std::size_t>(shift.size()) > kHaltonBases.size()) {
        throw std::invalid_argument("halton_point: dimension exceeds supported bases");
    }
    Eigen::VectorXd u(shift.size());
    for (Eigen::Index j = 0; j < shift.size(); ++j) {
        const double v = radical_inverse(index, kHaltonBases[static_cast<std::size_t>(j)]) + shift(j);
        u(j) = v - std::floor(v);
    }
    return u;
}

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

OptimizationReport maximize(const OptimizationProblem& problem, std::uint64_t rng_seed) {
    problem.validate();
    const Eigen::Index dim = problem.dimension();
    const std::size_t per_start = problem.budget / problem.start_count();

    std::vector<Eigen::VectorXd> starts;
    starts.reserve(problem.start_count());
    for (const auto& p : problem.initial_points) starts.push_back(clamp_to_box(p, problem));
    const Eigen::VectorXd shift = shift_from_seed(rng_seed, dim);
    const Eigen::VectorXd width = problem.upper - problem.lower;
    for (int i = 0; i < problem.seed_count; ++i) {
        const Eigen::VectorXd u = halton_point(static_cast<std::uint64_t>(i) + 1, shift);
        starts.push_back(problem.lower + u.cwiseProduct(width));
    }

    OptimizationReport report;
    report.best_value = -std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        SimplexRun run(problem, per_start);
        bool converged = run.run(start);
        Eigen::VectorXd point = run.best_point();
        double cost = run.best_cost();
        std::size_t used = run.evaluations();
        // Restart once around a collapsed simplex.
        if (converged && used < per_start) {
            SimplexRun again(problem, per_start - used);
            converged = again.run(point);
            if (again.best_cost() <= cost) {
                point = again.best_point();
                cost = again.best_cost();
            }
            used += again.evaluations();
        }
        report.evaluations_used += used;

        SeedOutcome outcome{start, point, -cost, used, converged};
        if (report.seed_results.empty() ||
            better(outcome.value, outcome.point, report.best_value, report.best_point)) {
            report.best_point = outcome.point;
            report.best_value = outcome.value;
        }
        report.seed_results.push_back(std::move(outcome));
    }
    report.best_value = problem.objective(report.best_point);
    ++report.evaluations_used;
    return report;
}

OptimizationReport grid_scan(const OptimizationProblem& problem, int steps_per_dim) {
    if (problem.lower.size() == 0 || problem.lower.size() != problem.upper.size() ||
        !(problem.lower.array() < problem.upper.array()).all() || !problem.objective) {
        throw std::invalid_argument("grid_scan: invalid problem");
    }
    if (steps_per_dim < 2) throw std::invalid_argument("grid_scan: steps_per_dim must be >= 2");
    const Eigen::Index dim = problem.dimension();
    if (dim > 5) throw std::invalid_argument("grid_scan: dimension must be <= 5");

    const Eigen::VectorXd step = (problem.upper - problem.lower) / static_cast<double>(steps_per_dim - 1);
    std::vector<int> counter(static_cast<std::size_t>(dim), 0);
    Eigen::VectorXd x(dim);

    OptimizationReport report;
    report.best_value = -std::numeric_limits<double>::infinity();
    bool first = true;
    while (true) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const int k = counter[static_cast<std::size_t>(j)];
            // The last lattice point sits exactly on the upper face.
            x(j) = (k == steps_per_dim - 1) ? problem.upper(j) : problem.lower(j) + k * step(j);
        }
        const double f = problem.objective(x);
        ++report.evaluations_used;
        if (first || (!std::isnan(f) && better(f, x, report.best_value, report.best_point))) {
            report.best_value = f;
            report.best_point = x;
            first = false;
        }
        Eigen::Index j = 0;
        for (; j < dim; ++j) {
            if (++counter[static_cast<std::size_t>(j)] < steps_per_dim) break;
            counter[static_cast<std::size_t>(j)] = 0;
        }
        if (j == dim) break;
    }
    report.seed_results.push_back({report.best_point, report.best_point, report.best_value,
                                   report.evaluations_used, true});
    return report;
}

}  // namespace bellchsh
