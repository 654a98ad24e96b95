#include "bellchsh/correlator.hpp"

#include "bellchsh/optimizer.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace bellchsh {

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::WithinClassical: return "WithinClassical";
        case Classification::ExceedsClassicalOnly: return "ExceedsClassicalOnly";
        case Classification::Violation: return "Violation";
        case Classification::ExceedsTsirelson: return "ExceedsTsirelson";
    }
    return "Unknown";
}

ChshResult classify(std::complex<double> value, bool real_constrained) {
    ChshResult r;
    r.value = value;
    r.magnitude = std::abs(value);
    r.classical_bound_used = real_constrained ? kClassicalBound : kTsirelsonBound;
    if (r.magnitude > kTsirelsonBound + kBoundTolerance) {
        r.classification = Classification::ExceedsTsirelson;
    } else if (r.magnitude <= r.classical_bound_used) {
        r.classification = Classification::WithinClassical;
    } else if (r.magnitude <= r.classical_bound_used + kBoundTolerance) {
        r.classification = Classification::ExceedsClassicalOnly;
    } else {
        r.classification = Classification::Violation;
    }
    return r;
}

double dichotomic_classical_max() {
    constexpr std::array<int, 2> signs = {-1, 1};
    int best = 0;
    for (int a : signs)
        for (int ap : signs)
            for (int b : signs)
                for (int bp : signs) {
                    const int z = (a + ap) * b + (a - ap) * bp;
                    best = std::max(best, std::abs(z));
                }
    return static_cast<double>(best);
}

PhaseScan unconstrained_phase_max(double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("unconstrained_phase_max: grid_step must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    const auto steps = static_cast<std::size_t>(std::ceil(two_pi / grid_step - 1e-9));

    std::vector<std::complex<double>> unit(steps);
    for (std::size_t k = 0; k < steps; ++k) unit[k] = std::polar(1.0, static_cast<double>(k) * grid_step);

    PhaseScan scan;
    std::array<std::size_t, 4> arg{};
    double best_sq = -1.0;
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t ip = 0; ip < steps; ++ip) {
            const std::complex<double> sum = unit[i] + unit[ip];
            const std::complex<double> diff = unit[i] - unit[ip];
            for (std::size_t j = 0; j < steps; ++j) {
                const std::complex<double> head = sum * unit[j];
                for (std::size_t jp = 0; jp < steps; ++jp) {
                    const double m = std::norm(head + diff * unit[jp]);
                    if (m > best_sq) {
                        best_sq = m;
                        arg = {i, ip, j, jp};
                    }
                }
            }
        }
    }
    scan.evaluations = steps * steps * steps * steps;

    const auto angle = [&](std::size_t k) { return static_cast<double>(k) * grid_step; };
    Eigen::VectorXd start(4);
    start << angle(arg[0]), angle(arg[1]), angle(arg[2]), angle(arg[3]);

    OptimizationProblem refine;
    refine.lower = Eigen::VectorXd::Constant(4, -two_pi);
    refine.upper = Eigen::VectorXd::Constant(4, 2.0 * two_pi);
    refine.objective = [](const Eigen::VectorXd& x) {
        return std::abs(unitary_phase_chsh(PhaseSetting(x(0), x(1), x(2), x(3))));
    };
    refine.seed_count = 0;
    refine.initial_points = {start};
    refine.budget = 20000;
    refine.tolerance = 1e-13;
    const OptimizationReport report = maximize(refine, 0);
    scan.evaluations += report.evaluations_used;

    const Eigen::VectorXd& x = report.best_point.size() ? report.best_point : start;
    const double refined = std::abs(unitary_phase_chsh(PhaseSetting(x(0), x(1), x(2), x(3))));
    if (refined >= std::sqrt(best_sq)) {
        scan.max_modulus = refined;
        scan.argmax = PhaseSetting(x(0), x(1), x(2), x(3));
    } else {
        scan.max_modulus = std::sqrt(best_sq);
        scan.argmax = PhaseSetting(start(0), start(1), start(2), start(3));
    }
    return scan;
}

PhaseScan real_constrained_phase_max(double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("real_constrained_phase_max: grid_step must be positive");
    const double pi = std::numbers::pi;
    const auto steps = static_cast<std::size_t>(std::ceil(2.0 * pi / grid_step - 1e-9));

    // α is free; β = n1π - α, β' = n2π - α, α' = m1π - β. Then α'+β' = (m1 - n1 + n2)π
    // automatically. Integers modulo 2 exhaust the distinct phases.
    PhaseScan scan;
    double best = -1.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double alpha = static_cast<double>(k) * grid_step;
        for (int n1 = 0; n1 < 2; ++n1)
            for (int n2 = 0; n2 < 2; ++n2)
                for (int m1 = 0; m1 < 2; ++m1) {
                    const double beta = n1 * pi - alpha;
                    const double beta_prime = n2 * pi - alpha;
                    const double alpha_prime = m1 * pi - beta;
                    const PhaseSetting s(alpha, alpha_prime, beta, beta_prime);
                    const double m = std::abs(unitary_phase_chsh(s));
                    ++scan.evaluations;
                    if (m > best) {
                        best = m;
                        scan.argmax = s;
                    }
                }
    }
    scan.max_modulus = best;
    return scan;
}

}  // namespace bellchsh
