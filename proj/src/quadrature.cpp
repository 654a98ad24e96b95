#include "bellchsh/quadrature.hpp"

namespace bellchsh {

QuadratureResult integrate(const QuadratureSpec& spec) {
    if (!spec.integrand) throw std::invalid_argument("integrate: integrand is empty");
    return integrate_adaptive(spec.integrand, spec.lo, spec.hi, spec.tol, spec.max_evals);
}

QuadratureResult integrate_2d_factored(const QuadratureSpec& fx, const QuadratureSpec& fy) {
    const QuadratureResult x = integrate(fx);
    const QuadratureResult y = integrate(fy);
    QuadratureResult r;
    r.value = x.value * y.value;
    r.error_estimate = std::abs(x.value) * y.error_estimate + std::abs(y.value) * x.error_estimate +
                       x.error_estimate * y.error_estimate;
    r.evaluations = x.evaluations + y.evaluations;
    r.status = !x.converged() ? x.status : y.status;
    return r;
}

}  // namespace bellchsh
