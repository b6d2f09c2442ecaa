#include <cmath>
#include <numbers>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

struct AgmResult {
    double mean;
    double weighted_c2;  // sum_n 2^{n-1} c_n^2
};

AgmResult agm_with_sums(double a, double b, double c0) {
    double w = 0.5 * c0 * c0;
    double pow2 = 0.5;
    for (int n = 0; n < 64; ++n) {
        double an = 0.5 * (a + b);
        double c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        w += pow2 * c * c;
        // Quadratic convergence: the next gap is below rounding.
        if (std::abs(c) < 1e-9 * a) break;
    }
    return {0.5 * (a + b), w};
}

}  // namespace

double elliptic_k_comp(double kp) {
    if (kp <= 0.0) throw SingularInput("elliptic_k: k = 1");
    return std::numbers::pi / (2.0 * agm_with_sums(1.0, kp, 0.0).mean);
}

double elliptic_e_comp(double kp) {
    if (kp == 0.0) return 1.0;
    double c0 = std::sqrt((1.0 - kp) * (1.0 + kp));
    AgmResult r = agm_with_sums(1.0, kp, c0);
    return std::numbers::pi / (2.0 * r.mean) * (1.0 - r.weighted_c2);
}

double elliptic_k(double k, const Precision& prec) {
    prec.validate();
    if (!(k >= 0.0) || k > 1.0) throw DomainError("elliptic_k: modulus outside [0, 1)");
    if (k == 1.0) throw SingularInput("elliptic_k: k = 1");
    return elliptic_k_comp(std::sqrt((1.0 - k) * (1.0 + k)));
}

double elliptic_e(double k, const Precision& prec) {
    prec.validate();
    if (!(k >= 0.0) || k > 1.0) throw DomainError("elliptic_e: modulus outside [0, 1]");
    return elliptic_e_comp(std::sqrt((1.0 - k) * (1.0 + k)));
}

template <class Real>
Real agm3_t(Real a, Real b, double tol, std::size_t max_iter) {
    using std::abs;
    using std::cbrt;
    if (b == Real(0.0)) return Real(0.0);
    for (std::size_t i = 0; i < max_iter; ++i) {
        if (abs(a - b) <= Real(tol) * a) return a;
        Real an = (a + Real(2.0) * b) / Real(3.0);
        b = cbrt(b * (a * a + a * b + b * b) / Real(3.0));
        a = an;
    }
    if (abs(a - b) <= Real(tol) * a * Real(10.0)) return a;
    throw NonConvergence("agm3: iteration limit");
}

template double agm3_t<double>(double, double, double, std::size_t);
template DoubleDouble agm3_t<DoubleDouble>(DoubleDouble, DoubleDouble, double, std::size_t);

double agm3(double a, double b, const Precision& prec) {
    prec.validate();
    if (a < 0 || b < 0 || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("agm3: negative input");
    if (a == 0 && b == 0) throw DomainError("agm3: both arguments zero");
    if (a == 0) return 0.0;
    return agm3_t<double>(a, b, std::max(prec.target_rel_error * 1e-3, 1e-16), 64);
}

DoubleDouble agm3_dd(DoubleDouble a, DoubleDouble b) {
    if (a.hi < 0 || b.hi < 0) throw DomainError("agm3: negative input");
    return agm3_t<DoubleDouble>(a, b, 1e-31, 64);
}

std::vector<double> agm3_gaps(double a, double b, std::size_t iterations) {
    std::vector<double> gaps;
    DoubleDouble x(a), y(b);
    for (std::size_t i = 0; i < iterations; ++i) {
        gaps.push_back(to_double(abs(x - y)));
        DoubleDouble xn = (x + DoubleDouble(2.0) * y) / DoubleDouble(3.0);
        y = cbrt(y * (x * x + x * y + y * y) / DoubleDouble(3.0));
        x = xn;
    }
    return gaps;
}

}  // namespace walkdens
