#include <cmath>
#include <limits>
#include <numbers>

#include "walkdens/densities/densities.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/numerics/special.hpp"
#include "walkdens/numerics/hypergeometric.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double edge_width = 1e-3;

// sqrt(x)/pi^2 Re K(k) with k^2 = (x+1)^3 (3-x)/(16x). 1 - k^2 = (x-1)^3 (x+3)/(16x) is used directly
// so that K keeps full accuracy as k -> 1.
double p3_elliptic_value(double x) {
    const double kp2 = (x - 1.0) * (x - 1.0) * (x - 1.0) * (x + 3.0) / (16.0 * x);
    double re_k;
    if (kp2 >= 0.0) {
        re_k = elliptic_k_comp(std::sqrt(kp2));
    } else {
        // k > 1: Re K(k) = K(1/k)/k, and 1/k has complementary modulus sqrt(k^2 - 1)/k.
        const double k = std::sqrt(1.0 - kp2);
        re_k = elliptic_k_comp(std::sqrt(-kp2) / k) / k;
    }
    return std::sqrt(x) / (pi * pi) * re_k;
}

// (2/(pi sqrt 3)) sum_k W3(2k) (y/3)^(2k) for 0 <= y < 1; the coefficients W3(2k)/9^k come from the
// three-term recurrence, which is stable in the forward direction.
double p3_series_reduced(double y, const Precision& prec, double* err) {
    const double y2 = y * y;
    double g0 = 1.0, g1 = 1.0 / 3.0;
    double pw = 1.0;
    double sum = 0.0;
    double term = 0.0;
    std::size_t k = 0;
    for (; k < prec.max_terms; ++k) {
        term = g0 * pw;
        sum += term;
        if (k > 4 && term * y2 < 0.25 * prec.target_rel_error * (1.0 - y2) * sum) break;
        const double kk = static_cast<double>(k);
        const double g2 = (9.0 * (10.0 * kk * kk + 30.0 * kk + 23.0) * g1 - 9.0 * (kk + 1.0) * (kk + 1.0) * g0) /
                          (81.0 * (kk + 2.0) * (kk + 2.0));
        g0 = g1;
        g1 = g2;
        pw *= y2;
    }
    if (k == prec.max_terms) throw SlowConvergence("p3 series: term budget exhausted near x = 1");
    const double c = 2.0 / (pi * std::sqrt(3.0));
    *err = c * (term * y2 / (1.0 - y2) + 4.0 * eps * (static_cast<double>(k) * 1e-3 + 1.0) * sum);
    return c * sum;
}

EvalResult make(double v, double err, DensityMethod m, const char* region, bool singular = false) {
    EvalResult r;
    r.value = v;
    r.err = err;
    r.method = m;
    r.region = region;
    r.singular = singular;
    return r;
}

}  // namespace

EvalResult p3(double x, P3Method method, const Precision& prec) {
    prec.validate();
    if (!(x > 0.0) || x > 3.0) return make(0.0, 0.0, DensityMethod::closed_form, "outside support");
    const bool near_one = std::abs(x - 1.0) < edge_width;
    if (x == 1.0) {
        return make(std::numeric_limits<double>::infinity(), 0.0, DensityMethod::asym_edge, "log singularity at 1",
                    true);
    }
    if (method == P3Method::automatic) {
        if (near_one) {
            // The complementary-modulus evaluation is the logarithmic expansion of K about k = 1,
            // 3/(2 pi^2) log(4/|x-1|) plus all of its corrections.
            return make(p3_elliptic_value(x), 16.0 * eps * p3_elliptic_value(x), DensityMethod::asym_edge,
                        "near 1", true);
        }
        method = x <= dispatch_seams().p3_series_limit ? P3Method::series : P3Method::agm;
    }
    switch (method) {
        case P3Method::elliptic: {
            const double v = p3_elliptic_value(x);
            return make(v, 32.0 * eps * v, DensityMethod::closed_form, x < 1.0 ? "0<x<1 reciprocal modulus" : "1<x<=3",
                        near_one);
        }
        case P3Method::hyper: {
            const double x2 = x * x;
            const double d = 3.0 + x2;
            const double z = x2 * (9.0 - x2) * (9.0 - x2) / (d * d * d);
            const double v = 2.0 * std::sqrt(3.0) * x / (pi * d) * hyp2f1_zero_balanced(1.0 / 3.0, 2.0 / 3.0, z, prec);
            // 1 - z = 27 (1 - x^2)^2 / (3 + x^2)^3 loses relative accuracy eps/(1 - z) through the log.
            const double w = 27.0 * (1.0 - x2) * (1.0 - x2) / (d * d * d);
            return make(v, 32.0 * eps * v + eps / w * 0.5, DensityMethod::closed_form, "hypergeometric", near_one);
        }
        case P3Method::agm: {
            const double x2 = x * x;
            const double b = 3.0 * std::cbrt((x2 - 1.0) * (x2 - 1.0));
            const double v = 2.0 * std::sqrt(3.0) / pi * x / agm3(3.0 + x2, b, prec);
            return make(v, 32.0 * eps * v, DensityMethod::closed_form, "cubic agm", near_one);
        }
        case P3Method::series: {
            double err = 0.0;
            if (x < 1.0) {
                const double v = x * p3_series_reduced(x, prec, &err);
                return make(v, x * err, DensityMethod::series0, "0<x<1", near_one);
            }
            // p3(x) = 4x/((3-x)(1+x)) p3(y), y = (3-x)/(1+x); the factor y of p3(y) cancels 3-x.
            const double y = (3.0 - x) / (1.0 + x);
            const double f = 4.0 * x / ((1.0 + x) * (1.0 + x));
            const double v = f * p3_series_reduced(y, prec, &err);
            return make(v, f * err, DensityMethod::series0, "1<x<=3 via functional relation", near_one);
        }
        case P3Method::automatic: break;
    }
    throw MethodUnavailable("p3: unknown method");
}

}  // namespace walkdens
