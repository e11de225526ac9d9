#pragma once

#include <functional>

namespace costsense {

/// Adaptive 1-D integration settings. Integration stops when the estimated
/// error falls below `rel_tol` times the L1 norm of the integrand, or when
/// `max_depth` bisections have been spent.
struct QuadratureConfig {
    double rel_tol{1e-9};
    unsigned max_depth{30};
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (15 point) on [a, b]. For smooth integrands.
double integrate(const Integrand& f, double a, double b, const QuadratureConfig& config = {});

/// Double-exponential (tanh-sinh) rule on [a, b]; tolerates integrable
/// endpoint singularities such as x^(alpha-1) with alpha < 1.
double integrate_singular(const Integrand& f, double a, double b, const QuadratureConfig& config = {});

}  // namespace costsense
