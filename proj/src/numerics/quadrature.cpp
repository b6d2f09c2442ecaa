#include "walkdens/numerics/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace walkdens {

QuadResult<double> integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                               double rel_tol) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
    QuadResult<double> r;
    double l1 = 0.0;
    std::size_t levels = 0;
    r.value = integrator.integrate(f, a, b, rel_tol, &r.error, &l1, &levels);
    r.evaluations = levels;
    return r;
}

double richardson_derivative(const std::function<double(double)>& f, double x, int order, double h,
                             double* error) {
    if (order != 1 && order != 2) throw InvalidParameter("richardson_derivative: order must be 1 or 2");
    constexpr int levels = 6;
    double table[levels][levels];
    double fx = order == 2 ? f(x) : 0.0;
    double best = 0.0, best_err = 1e300;
    for (int i = 0; i < levels; ++i) {
        double hi = h / std::pow(2.0, i);
        double fp = f(x + hi), fm = f(x - hi);
        table[i][0] = order == 1 ? (fp - fm) / (2.0 * hi) : (fp - 2.0 * fx + fm) / (hi * hi);
        double factor = 1.0;
        for (int j = 1; j <= i; ++j) {
            factor *= 4.0;
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
            double err = std::max(std::abs(table[i][j] - table[i][j - 1]), std::abs(table[i][j] - table[i - 1][j - 1]));
            if (err < best_err) {
                best_err = err;
                best = table[i][j];
            }
        }
    }
    if (error) *error = best_err;
    return best;
}

double stencil_derivative(const std::function<double(double)>& f, double x, int order, double h) {
    static constexpr double d1[5] = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    static constexpr double d2[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    if (order == 1) {
        double s = 0.0;
        for (int k = 1; k <= 4; ++k) s += d1[k] * (f(x + k * h) - f(x - k * h));
        return s / h;
    }
    if (order == 2) {
        double s = d2[0] * f(x);
        for (int k = 1; k <= 4; ++k) s += d2[k] * (f(x + k * h) + f(x - k * h));
        return s / (h * h);
    }
    throw InvalidParameter("stencil_derivative: order must be 1 or 2");
}

}  // namespace walkdens
