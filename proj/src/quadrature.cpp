#include "costsense/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "costsense/error.hpp"

namespace costsense {

double integrate(const Integrand& f, double a, double b, const QuadratureConfig& config) {
    if (!(a <= b)) throw Error(ErrorKind::invalid_argument, "integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, config.max_depth, config.rel_tol,
                                                                           &error);
}

double integrate_singular(const Integrand& f, double a, double b, const QuadratureConfig& config) {
    if (!(a <= b)) throw Error(ErrorKind::invalid_argument, "integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    // The integrator keeps abscissa tables; one per thread keeps calls independent.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, config.rel_tol);
}

}  // namespace costsense
