#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "walkdens/densities/densities.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/numerics/bessel_integral.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double small_x = 2e-3;

// Abscissas where p_n or one of its derivatives is singular: n, n-2, ... down to 1 or 2.
std::vector<double> singular_points(int n) {
    std::vector<double> pts;
    for (int j = n; j >= 1; j -= 2) pts.push_back(j);
    return pts;
}

bool near_singular(int n, double x) {
    for (double s : singular_points(n))
        if (s < n && std::abs(x - s) < 1e-3) return true;
    return false;
}


struct SmallXAnchor {
    // Coefficients of p_n(x)/x in small_x_basis, and the size of the last one's contribution at small_x.
    double c[3] = {0.0, 0.0, 0.0};
    double err = 0.0;
};

// Leading terms of p_n(x)/x at 0. Even n picks up logarithms and, for n = 6, an odd power from the
// non-oscillating t^(-n/2) part of J0^n.
void small_x_basis(int n, double x, double out[3]) {
    const double lx = std::log(x);
    out[0] = 1.0;
    switch (n) {
        case 4: out[1] = lx; out[2] = x * x * lx; break;
        case 6: out[1] = x; out[2] = x * x * lx; break;
        case 3:
        case 5: out[1] = x * x; out[2] = x * x * x * x; break;
        default: out[1] = x * x; out[2] = x * x * x; break;
    }
}

const SmallXAnchor& small_x_anchor(int n, const Precision& prec) {
    static std::mutex mu;
    static std::map<int, SmallXAnchor> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    Eigen::Matrix3d m;
    Eigen::Vector3d f;
    double qerr = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double xi = small_x * (1 << i);
        const EvalResult r = pn_quadrature(n, xi, prec);
        double b[3];
        small_x_basis(n, xi, b);
        for (int j = 0; j < 3; ++j) m(i, j) = b[j];
        f(i) = r.value / xi;
        qerr = std::max(qerr, r.err / xi);
    }
    const Eigen::Vector3d c = m.fullPivLu().solve(f);
    double b0[3];
    small_x_basis(n, small_x, b0);
    SmallXAnchor a;
    for (int j = 0; j < 3; ++j) a.c[j] = c(j);
    // The neglected next term is taken to be as large as the last fitted one, plus amplified noise.
    a.err = std::abs(c(2) * b0[2]) + 100.0 * qerr;
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(n, a).first->second;
}

}  // namespace

EvalResult pn_quadrature(int n, double x, const Precision& prec) {
    prec.validate();
    if (n < 2) throw DomainError("pn_quadrature: n must be at least 2");
    if (!(x > 0.0)) throw DomainError("pn_quadrature: x must be positive");
    EvalResult r;
    r.method = DensityMethod::quadrature;
    r.singular = near_singular(n, x);
    if (x > n) {
        r.region = "outside support";
        return r;
    }
    if (x < small_x) {
        if (n == 2) return p2(x);
        // The finite part of the Bessel integral needs a window of length ~1/x, so below small_x the
        // ratio p_n(x)/x is extended from two cached anchors with its leading correction term.
        const SmallXAnchor& a = small_x_anchor(n, prec);
        double b[3];
        small_x_basis(n, x, b);
        r.value = x * (a.c[0] + a.c[1] * b[1] + a.c[2] * b[2]);
        r.err = x * a.err + 8.0 * eps * r.value;
        r.region = "small x";
        return r;
    }
    BesselIntegrand in;
    in.power = 1.0;
    BesselProduct p;
    p.coefficient = x;
    p.factors.push_back({0, x});
    for (int i = 0; i < n; ++i) p.factors.push_back({0, 1.0});
    in.products.push_back(p);
    const BesselIntegral b = integrate_bessel_product(in, prec);
    if (b.divergent) {
        // Non-oscillating tail component that is not integrable: an infinite density value.
        r.value = std::numeric_limits<double>::infinity();
        r.region = "singular point";
        r.singular = true;
        return r;
    }
    if (!(b.error <= 1e-6 * std::max(1.0, std::abs(b.value))))
        throw NonConvergence("pn_quadrature: oscillatory tail did not converge");
    r.value = b.value;
    r.err = b.error;
    r.region = "Bessel integral";
    return r;
}

EvalResult density(int n, double x, const Precision& prec) {
    switch (n) {
        case 1: throw DomainError("density: a single step has no density");
        case 2: return p2(x);
        case 3: return p3(x, P3Method::automatic, prec);
        case 4: return p4(x, P4Method::automatic, prec);
        case 5: return p5(x, P5Method::automatic, prec);
        default:
            if (n < 1) throw DomainError("density: n must be positive");
            if (!(x > 0.0) || x > n) {
                EvalResult r;
                r.method = DensityMethod::quadrature;
                r.region = "outside support";
                return r;
            }
            return pn_quadrature(n, x, prec);
    }
}

MomentValue density_moment(int n, double s, const Precision& prec) {
    prec.validate();
    if (n < 2) throw DomainError("density_moment: n must be at least 2");
    if (!(s > (n == 2 ? -1.0 : -2.0))) throw DomainError("density_moment: integral diverges at 0");
    std::vector<double> cuts = singular_points(n);
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    boost::math::quadrature::tanh_sinh<double> ts(10);
    const double tol = std::max(prec.target_rel_error, 1e-12);
    MomentValue m;
    m.method = MomentMethod::quadrature_of_density;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto f = [&](double x) {
            // p_n(x)/x stays bounded at 0, so x^(s+1) carries all of the growth there.
            const double v = density(n, x, prec).value / x;
            return std::isfinite(v) ? std::pow(x, s + 1.0) * v : 0.0;
        };
        double err = 0.0;
        m.value += ts.integrate(f, cuts[i], cuts[i + 1], tol, &err);
        m.err += err;
    }
    m.err += 1e-12 * std::abs(m.value);
    // The inverse square root of p_2 at 2 is evaluated from a rounded x; the resulting loss of
    // about sqrt(eps) is invisible to the quadrature error estimate.
    if (n == 2) m.err += 1e-7 * std::abs(m.value);
    return m;
}

EvalResult p5(double x, P5Method method, const Precision& prec) {
    prec.validate();
    EvalResult r;
    if (!(x > 0.0) || x >= 5.0) {
        r.region = "outside support";
        return r;
    }
    if (method == P5Method::automatic) method = x <= dispatch_seams().p5_series_limit ? P5Method::series0 : P5Method::quadrature;
    if (method == P5Method::series0) {
        // The series is p5 only on (0, 1]; past 1 it continues a different analytic function.
        if (x > 1.0) throw MethodUnavailable("p5 series0: valid for 0 < x <= 1 only");
        const LogPowerSeries& s = series_at_zero(5, series_max_terms);
        const double x2 = x * x;
        double pw = x, sum = 0.0, mag = 0.0, last = 0.0;
        for (double a : s.a) {
            const double t = a * pw;
            sum += t;
            mag += std::abs(t);
            last = std::abs(t);
            if (last < 1e-18 * sum) break;
            pw *= x2;
        }
        r.value = sum;
        r.err = last * x2 / (9.0 - x2) + 8.0 * eps * mag;
        r.method = DensityMethod::series0;
        r.region = "0<x<=1";
        r.singular = near_singular(5, x);
        return r;
    }
    r = pn_quadrature(5, x, prec);
    r.region = x < 1.0 ? "0<x<1" : (x < 3.0 ? "1<x<3" : "3<x<5");
    return r;
}

EvalResult pn_convolution(int n, double x, const Precision& prec) {
    prec.validate();
    if (n < 3 || n > 6) throw DomainError("pn_convolution: n must be in 3..6");
    EvalResult r;
    r.method = DensityMethod::convolution;
    r.singular = near_singular(n, x);
    if (!(x > 0.0) || x >= n) {
        r.region = "outside support";
        return r;
    }
    const int m = n - 1;
    // Averaging phi_m over the angle of the last step and substituting y = |x - e^(ia)| gives
    // p_n(x) = int p_m(y) k(y) dy over |x-1| < y < x+1, with k the two-step density of lengths y and 1
    // evaluated at x: k(y) = 2x / (pi sqrt((y^2 - lo^2)(hi^2 - y^2))).
    const double lo = std::abs(x - 1.0), hi = x + 1.0;
    std::vector<double> cuts{lo, std::min(hi, static_cast<double>(m))};
    for (double s : singular_points(m))
        if (s > lo && s < cuts[1]) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    double inner_err = 0.0;
    boost::math::quadrature::tanh_sinh<double> ts(12);
    const double rel = std::max(prec.target_rel_error, 1e-13);
    double sum = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        // yc is the signed distance to the nearer endpoint, exact where y itself is rounded.
        auto f = [&](double y, double yc) {
            const double da = yc < 0.0 ? -yc : (b - a) - yc;
            const double db = yc < 0.0 ? (b - a) + yc : yc;
            auto gap = [&](double c) { return yc < 0.0 ? (c - a) - da : (c - b) + db; };
            const double below = -gap(lo), above = gap(hi);
            if (!(below > 0.0) || !(above > 0.0)) return 0.0;
            // Square roots taken separately so that y ~ 1e-300 near lo = 0 does not underflow.
            const double kernel =
                2.0 * x / (pi * std::sqrt(below) * std::sqrt(y + lo) * std::sqrt(above * (hi + y)));
            double pm;
            if (m == 2) {
                const double g2 = gap(2.0);
                if (!(g2 > 0.0)) return 0.0;
                pm = 2.0 / (pi * std::sqrt(g2 * (2.0 + y)));
            } else {
                const EvalResult v = density(m, y, prec);
                if (!std::isfinite(v.value)) return 0.0;
                inner_err = std::max(inner_err, v.err);
                pm = v.value;
            }
            return pm == 0.0 ? 0.0 : pm * kernel;
        };
        double e = 0.0;
        sum += ts.integrate(f, a, b, rel, &e);
        err += e;
    }
    r.value = sum;
    // The kernel integrates to at most 1, so an absolute inner error carries over unchanged.
    r.err = err + inner_err + 8.0 * eps * std::abs(r.value);
    r.region = "average over the last step";
    return r;
}

}  // namespace walkdens
