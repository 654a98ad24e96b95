#include "bellchsh/angular.hpp"

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace bellchsh {

namespace {

/// e^{iθL} restricted to the m ∈ {+1, -1} subspace, basis order (+1, -1).
Eigen::Matrix2cd rotation(double theta) {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    u(0, 0) = std::polar(1.0, theta);
    u(1, 1) = std::polar(1.0, -theta);
    return u;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

}  // namespace

double pair_correlator_bruteforce(double alpha, double beta) {
    // Product basis |m_A, m_B>: index 2*iA + iB with i = 0 for m = +1, 1 for m = -1.
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(1) = 1.0 / std::numbers::sqrt2;   // |1, -1>
    psi(2) = -1.0 / std::numbers::sqrt2;  // |-1, 1>
    const Eigen::Matrix4cd u = kron(rotation(alpha), rotation(beta));
    return psi.dot(u * psi).real();
}

AngularSetting staggered_angles() {
    constexpr double pi = std::numbers::pi;
    return {0.0, pi / 2.0, pi / 4.0, 3.0 * pi / 4.0};
}

AngularSetting maximizing_angles() {
    constexpr double pi = std::numbers::pi;
    return {0.0, pi / 2.0, pi / 4.0, -pi / 4.0};
}

AngularMaximum maximize_angular(std::uint64_t rng_seed, int seed_count, std::size_t budget,
                                double tolerance) {
    OptimizationProblem p;
    p.lower = Eigen::VectorXd::Zero(4);
    p.upper = Eigen::VectorXd::Constant(4, 2.0 * std::numbers::pi);
    p.objective = [](const Eigen::VectorXd& x) {
        return angular_chsh(AngularSetting(x(0), x(1), x(2), x(3)));
    };
    p.seed_count = seed_count;
    p.budget = budget;
    p.tolerance = tolerance;

    AngularMaximum m;
    m.report = maximize(p, rng_seed);
    const Eigen::VectorXd& x = m.report.best_point;
    m.setting = AngularSetting(x(0), x(1), x(2), x(3));
    m.value = angular_chsh(m.setting);
    m.violation = is_violation(m.setting);
    return m;
}

}  // namespace bellchsh
