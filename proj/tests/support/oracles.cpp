#include "support/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace secmodels::oracle {

using boost::math::quadrature::gauss_kronrod;

double patched_fraction_quadrature(double k, double lambda, double beta, double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    const double upper = std::pow(t / lambda, k);
    const auto g = [&](double u) { return std::exp(-u - beta * (t - lambda * std::pow(u, 1.0 / k))); };
    const double unpatched_tail = gauss_kronrod<double, 61>::integrate(g, 0.0, upper, 20, 1e-14);
    return -std::expm1(-upper) - unpatched_tail;
}

double exploit_curve(double A, double a, double b, double t, bool clamp) {
    if (clamp && b > 0.0 && t > a / b) {
        t = a / b;
    }
    return A * std::pow(t, a) * std::exp(-b * t);
}

double power_law_integral_quadrature(double c, double alpha, double t1, double t2) {
    // Integrate in log time so the integrand stays smooth over wide ranges.
    const auto g = [&](double s) { return c * std::exp((1.0 - alpha) * s); };
    return gauss_kronrod<double, 61>::integrate(g, std::log(t1), std::log(t2), 20, 1e-14);
}

}  // namespace secmodels::oracle
