#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "walkdens/densities/densities.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/numerics/hypergeometric.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();


EvalResult make(double v, double err, DensityMethod m, const char* region, bool singular) {
    EvalResult r;
    r.value = v;
    r.err = err;
    r.method = m;
    r.region = region;
    r.singular = singular;
    return r;
}

EvalResult p4_series0(double x, bool singular) {
    const LogPowerSeries& s = series_at_zero(4, series_max_terms);
    const double lx = std::log(x);
    const double x2 = x * x;
    double pw = x;
    double sum = 0.0, mag = 0.0, last = 0.0;
    for (std::size_t k = 0; k < s.a.size(); ++k) {
        const double t = (s.a[k] + s.b[k] * lx) * pw;
        sum += t;
        mag += std::abs(t);
        last = std::abs(t);
        if (k > 4 && last < 1e-18 * std::abs(sum)) break;
        pw *= x2;
    }
    // Coefficients decay like 4^-k, so the neglected tail is about last * r/(1 - r), r = x^2/4.
    const double r = x2 / 4.0;
    const double err = (r < 1.0 ? last * r / (1.0 - r) : std::numeric_limits<double>::infinity()) + 8.0 * eps * mag;
    return make(sum, err, DensityMethod::series0, "0<x<=1.5", singular);
}

EvalResult p4_hyper(double x, const Precision& prec, bool singular) {
    if (x == 2.0) throw MethodUnavailable("p4 hyper: argument of the 3F2 is exactly 1 at x = 2");
    const double x2 = x * x;
    const double u = 16.0 - x2;
    const double z = u * u * u / (108.0 * x2 * x2);
    const double pre = 2.0 / (pi * pi) * std::sqrt(u) / x;
    if (x > 2.0) {
        const Estimate e = hyp_pfq_estimate({{0.5, 0.5, 0.5}, {5.0 / 6.0, 7.0 / 6.0}}, z, prec);
        return make(pre * e.value, pre * e.error + 8.0 * eps * std::abs(pre * e.value), DensityMethod::closed_form,
                    "2<x<4", singular);
    }
    const Estimate e = hyp32_log_continuation(z, prec);
    return make(pre * e.value, pre * e.error + 8.0 * eps * std::abs(pre * e.value), DensityMethod::log_continuation,
                "0<x<2", singular);
}

EvalResult p4_asym(double x) {
    const double u = 4.0 - x;
    const double c = std::sqrt(2.0) / (pi * pi);
    const double t3 = 23.0 / 512.0 * c * u * u * std::sqrt(u);
    const double v = c * std::sqrt(u) + 3.0 / 16.0 * c * u * std::sqrt(u) + t3;
    // The next term is O(u^(7/2)); its size is estimated from the ratio of the known ones.
    return make(v, std::abs(t3) * u + 8.0 * eps * v, DensityMethod::asym_edge, "x->4", false);
}

}  // namespace

EvalResult p4(double x, P4Method method, const Precision& prec) {
    prec.validate();
    if (!(x > 0.0) || x >= 4.0) return make(0.0, 0.0, DensityMethod::closed_form, "outside support", false);
    const bool singular = std::abs(x - 2.0) < 1e-3;
    if (method == P4Method::automatic) {
        const DispatchSeams& seams = dispatch_seams();
        if (x <= seams.p4_series_limit)
            method = P4Method::series0;
        else if (std::abs(x - 2.0) < seams.p4_quad_halfwidth)
            method = P4Method::quadrature;
        else if (x > seams.p4_edge_start)
            method = P4Method::asym4;
        else
            method = P4Method::hyper;
    }
    switch (method) {
        case P4Method::series0:
            if (x >= 2.0) throw MethodUnavailable("p4 series0: diverges for x >= 2");
            return p4_series0(x, singular);
        case P4Method::hyper: return p4_hyper(x, prec, singular);
        case P4Method::asym4: return p4_asym(x);
        case P4Method::quadrature: {
            EvalResult r = pn_quadrature(4, x, prec);
            const double tol = std::max(1e-9, 100.0 * prec.target_rel_error) * std::abs(r.value);
            if (r.err > tol) throw SlowConvergence("p4 quadrature: tolerance not met near x = 2");
            r.singular = singular;
            r.region = "near 2";
            return r;
        }
        case P4Method::automatic: break;
    }
    throw MethodUnavailable("p4: unknown method");
}

ModularSides p4_modular_sides(double y, const Precision& prec) {
    if (!(y > 0.0)) throw DomainError("p4_modular_sides: y must be positive");
    using C = std::complex<double>;
    const C tau(-0.5, y);
    const C e1 = dedekind_eta(tau, prec), e2 = dedekind_eta(2.0 * tau, prec), e3 = dedekind_eta(3.0 * tau, prec),
            e6 = dedekind_eta(6.0 * tau, prec);
    const C q = (e2 * e6) / (e1 * e3);
    const C arg = C(0.0, 8.0) * q * q * q;
    const C rhs = 6.0 * (2.0 * tau + 1.0) / pi * e1 * e2 * e3 * e6;
    if (std::abs(arg.imag()) > 1e-10 * std::abs(arg) || !(arg.real() > 0.0 && arg.real() < 2.0))
        throw DomainError("p4_modular_sides: argument of p4 is not in (0, 2)");
    ModularSides s;
    s.argument = arg.real();
    s.lhs = p4(s.argument, P4Method::automatic, prec).value;
    s.rhs = rhs.real();
    return s;
}

double p4_modular_check(double y, const Precision& prec) {
    const ModularSides s = p4_modular_sides(y, prec);
    return std::abs(s.lhs - s.rhs);
}

}  // namespace walkdens
