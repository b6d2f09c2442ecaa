#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "walkdens/errors.hpp"
#include "walkdens/numerics/bessel_integral.hpp"
#include "walkdens/numerics/hypergeometric.hpp"
#include "walkdens/numerics/quadrature.hpp"
#include "walkdens/numerics/special.hpp"

using namespace walkdens;
using std::numbers::pi;

namespace {

// Plain double power series for J_m, used only as a bisection oracle.
double j_series_plain(int m, double x) {
    double term = 1.0;
    for (int j = 1; j <= m; ++j) term *= 0.5 * x / j;
    double sum = term;
    for (int k = 1; k < 80; ++k) {
        term *= -0.25 * x * x / (static_cast<double>(k) * (k + m));
        sum += term;
    }
    return sum;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("bessel_j trivial values and parity") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(1, -2.5) == doctest::Approx(-bessel_j(1, 2.5)).epsilon(1e-15));
    CHECK_THROWS_AS(bessel_j(2, 1.0), DomainError);
}

TEST_CASE("bessel_j first zero located by bisection on the power series") {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (j_series_plain(0, lo) * j_series_plain(0, mid) <= 0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double j01 = 0.5 * (lo + hi);
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(std::abs(bessel_j(0, j01)) < 1e-12);
}

TEST_CASE("bessel_j branches agree at the crossover") {
    for (int m : {0, 1}) {
        for (double x : {17.0, 18.0, 19.0, 21.5}) {
            double s = to_double(bessel_j_series(m, x));
            double a = bessel_j_asymptotic(m, x);
            CHECK(std::abs(s - a) < 1e-14);
        }
    }
    // J_m by recurrence above the crossover matches the series.
    for (int m = 2; m <= 5; ++m) {
        double x = 19.0;
        CHECK(std::abs(bessel_jn(m, x) - to_double(bessel_j_series(m, x))) < 1e-14);
    }
}

TEST_CASE("derivative of J0 is -J1") {
    double worst = 0.0;
    for (double x = 0.5; x <= 20.0; x += 0.5) {
        double h = 1e-4;
        double d = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2 * h);
        worst = std::max(worst, std::abs(d + bessel_j(1, x)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("modified Bessel functions") {
    CHECK(modified_bessel(ModifiedKind::I0, 0.0) == 1.0);
    CHECK_THROWS_AS(modified_bessel(ModifiedKind::K0, 0.0), DomainError);
    CHECK_THROWS_AS(modified_bessel(ModifiedKind::K0, -1.0), DomainError);

    // I0(1) from the defining series summed forward and with compensation.
    double fwd = 0.0, term = 1.0, kahan = 0.0, c = 0.0;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) term *= 0.25 / (static_cast<double>(k) * k);
        fwd += term;
        double y = term - c, t = kahan + y;
        c = (t - kahan) - y;
        kahan = t;
    }
    CHECK(std::abs(fwd - kahan) < 1e-14);
    CHECK(rel(modified_bessel(ModifiedKind::I0, 1.0), kahan) < 1e-14);

    // K0 branches meet continuously.
    for (double x : {2.0, 25.0}) {
        double below = modified_bessel(ModifiedKind::K0, std::nextafter(x, 0.0));
        double above = modified_bessel(ModifiedKind::K0, std::nextafter(x, 100.0));
        CHECK(rel(below, above) < 1e-12);
    }
    // Wronskian I0 K1 + I1 K0 = 1/x with I1 = I0', K1 = -K0'.
    for (double x : {0.7, 3.0, 12.0, 30.0}) {
        auto i0 = [](double t) { return modified_bessel(ModifiedKind::I0, t); };
        auto k0 = [](double t) { return modified_bessel(ModifiedKind::K0, t); };
        double i1 = stencil_derivative(i0, x, 1, 1e-2);
        double k1 = -stencil_derivative(k0, x, 1, 1e-2);
        CHECK(rel(i0(x) * k1 + i1 * k0(x), 1.0 / x) < 1e-10);
    }
}

TEST_CASE("Nicholson identity for I0 K0") {
    for (double t : {0.5, 1.0, 2.0}) {
        auto f = [t](double a) {
            double arg = 2 * t * std::sin(a);
            return arg > 0 ? modified_bessel(ModifiedKind::K0, arg) : 0.0;
        };
        auto r = integrate_endpoint_singular(f, 0.0, pi / 2, 1e-14);
        double lhs = modified_bessel(ModifiedKind::I0, t) * modified_bessel(ModifiedKind::K0, t);
        CHECK(std::abs(lhs - 2 / pi * r.value) < 1e-10);
    }
}

TEST_CASE("complete elliptic integrals") {
    CHECK(elliptic_k(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(elliptic_e(1.0) == 1.0);
    CHECK(elliptic_e(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(elliptic_k(1.0), SingularInput);
    CHECK_THROWS_AS(elliptic_k(1.5), DomainError);
    CHECK_THROWS_AS(elliptic_e(-0.1), DomainError);
    double k = 1 / std::sqrt(2.0);
    double K = elliptic_k(k), E = elliptic_e(k);
    CHECK(std::abs(2 * E * K - K * K - pi / 2) < 1e-13);
    for (double kk : {0.1, 0.5, 0.9, 0.999}) {
        double kp = std::sqrt(1 - kk * kk);
        double legendre = elliptic_e(kk) * elliptic_k(kp) + elliptic_e(kp) * elliptic_k(kk) -
                          elliptic_k(kk) * elliptic_k(kp);
        CHECK(std::abs(legendre - pi / 2) < 1e-13);
    }
}

TEST_CASE("Clausen function") {
    CHECK(clausen(0.0) == 0.0);
    CHECK(std::abs(clausen(pi)) < 1e-15);
    // Partial sums over whole periods of sin(n pi/3), Richardson-extrapolated in N^{-2}, N^{-3}, ...
    const double theta = pi / 3;
    std::vector<double> sums;
    double s = 0.0;
    int n = 0;
    for (int level = 0; level < 7; ++level) {
        int target = 6 * 64 * (1 << level);
        for (; n < target;) {
            ++n;
            s += std::sin(n * theta) / (static_cast<double>(n) * n);
        }
        sums.push_back(s);
    }
    for (std::size_t j = 1; j < sums.size(); ++j) {
        double f = std::pow(2.0, j + 1);
        for (std::size_t i = sums.size() - 1; i >= j; --i) sums[i] = (f * sums[i] - sums[i - 1]) / (f - 1);
    }
    CHECK(std::abs(clausen(theta) - sums.back()) < 1e-12);
    CHECK(clausen(theta) == doctest::Approx(1.014941606).epsilon(1e-9));
    // Log-sine integral form.
    for (double th : {0.4, 1.3, 2.9}) {
        auto r = integrate_endpoint_singular([](double t) { return -std::log(2 * std::sin(t / 2)); }, 0.0, th);
        CHECK(std::abs(clausen(th) - r.value) < 1e-13);
    }
    for (double th : {0.3, 1.7, 3.0}) {
        CHECK(clausen(-th) == -clausen(th));
        CHECK(std::abs(clausen(th + 2 * pi) - clausen(th)) < 1e-14);
    }
}

TEST_CASE("cubic AGM") {
    CHECK(agm3(5, 5) == 5.0);
    CHECK(agm3(12, 12) == 12.0);
    CHECK_THROWS_AS(agm3(-1, 2), DomainError);
    double s = 0.7;
    double f = hyp_pfq({{1.0 / 3, 2.0 / 3}, {1.0}}, 1 - s * s * s);
    CHECK(std::abs(1 / agm3(1, s) - f) < 1e-12);
    // Once the relative gap is below 0.1 each step at least cubes it.
    auto gaps = agm3_gaps(1.0, 0.3, 6);
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        if (gaps[i] < 0.1 && gaps[i + 1] > 1e-30) CHECK(gaps[i + 1] <= gaps[i] * gaps[i] * gaps[i]);
    }
}

TEST_CASE("generalized hypergeometric series") {
    CHECK(hyp_pfq({{0.3, 0.7, 1.1}, {2.0, 0.4}}, 0.0) == 1.0);
    CHECK_THROWS_AS(hyp_pfq({{0.5, 0.5}, {1.0}}, 1.5), DomainError);
    CHECK_THROWS_AS(hyp_pfq({{0.5, 0.5}, {-2.0}}, 0.5), DomainError);
    // 2F1(1,1;2;z) = -log(1-z)/z.
    CHECK(rel(hyp_pfq({{1, 1}, {2}}, 0.9), -std::log(0.1) / 0.9) < 1e-14);
    // Clausen identity at theta = pi/6: 2 sin(theta) F = Cl(2 theta) + 2 theta log(2 sin theta).
    double F = hyp_pfq({{0.5, 0.5, 0.5}, {1.5, 1.5}}, 0.25);
    CHECK(std::abs(F - clausen(pi / 3)) < 1e-12);
    // Gauss summation at z = 1: 2F1(a,b;c;1) = G(c)G(c-a-b)/(G(c-a)G(c-b)).
    double a = 0.3, b = 0.45, c = 1.9;
    double gauss = gamma_fn(c) * gamma_fn(c - a - b) / (gamma_fn(c - a) * gamma_fn(c - b));
    CHECK(rel(hyp_pfq({{a, b}, {c}}, 1.0), gauss) < 1e-12);
    // Kummer at z = -1: 2F1(a,b;1+a-b;-1) = G(1+a-b)G(1+a/2)/(G(1+a)G(1+a/2-b)).
    double kummer = gamma_fn(1 + a - b) * gamma_fn(1 + a / 2) / (gamma_fn(1 + a) * gamma_fn(1 + a / 2 - b));
    CHECK(rel(hyp_pfq({{a, b}, {1 + a - b}}, -1.0), kummer) < 1e-11);
    // Terminating series.
    CHECK(rel(hyp_pfq({{-3, 2}, {1}}, 0.5), 1 - 3 * 2 * 0.5 + 3 * 2 * 3 * 0.25 / 2 - 1 * 2 * 3 * 4 * 0.125 / 6) < 1e-15);
}

TEST_CASE("hypergeometric ODE residuals") {
    // 2F1: z(1-z)F'' + (c - (a+b+1)z)F' - abF = 0.
    double a = 1.0 / 3, b = 2.0 / 3, c = 1.0;
    auto f = [&](double z) { return hyp_pfq({{a, b}, {c}}, z); };
    for (double z : {0.2, 0.5, 0.7}) {
        double d1 = stencil_derivative(f, z, 1, 1e-2), d2 = stencil_derivative(f, z, 2, 1e-2);
        CHECK(std::abs(z * (1 - z) * d2 + (c - (a + b + 1) * z) * d1 - a * b * f(z)) < 1e-6);
    }
    // 3F2 in theta form: [theta(theta+b1-1)(theta+b2-1) - z(theta+a1)(theta+a2)(theta+a3)] F = 0.
    std::vector<double> up{0.5, 0.5, 0.5}, lo{5.0 / 6, 7.0 / 6};
    auto g = [&](double z) { return hyp_pfq({up, lo}, z); };
    for (double z : {0.2, 0.45}) {
        // theta^k F via derivatives: th1 = zF', th2 = zF' + z^2F'', th3 = zF' + 3z^2F'' + z^3F'''.
        double h = 1e-2;
        double d1 = stencil_derivative(g, z, 1, h), d2 = stencil_derivative(g, z, 2, h);
        auto gp = [&](double t) { return stencil_derivative(g, t, 2, h); };
        double d3 = stencil_derivative(gp, z, 1, h);
        double F0 = g(z);
        double th[4] = {F0, z * d1, z * d1 + z * z * d2, z * d1 + 3 * z * z * d2 + z * z * z * d3};
        // Expand theta(theta+b1-1)(theta+b2-1) and (theta+a1)(theta+a2)(theta+a3) as cubics in theta.
        auto cubic = [](double r1, double r2, double r3) {
            return std::vector<double>{r1 * r2 * r3, r1 * r2 + r1 * r3 + r2 * r3, r1 + r2 + r3, 1.0};
        };
        auto lhs = cubic(0.0, lo[0] - 1, lo[1] - 1), rhs = cubic(up[0], up[1], up[2]);
        double res = 0.0;
        for (int k = 0; k < 4; ++k) res += (lhs[k] - z * rhs[k]) * th[k];
        CHECK(std::abs(res) < 1e-6);
    }
}

TEST_CASE("double-double mode reaches 25 digits") {
    // 2F1(1,1;2;1/2) = 2 log 2.
    DoubleDouble v = hyp_pfq_dd({1.0, 1.0}, {2.0}, DoubleDouble(0.5));
    DoubleDouble expect = DoubleDouble(2.0) * dd_const::log2;
    CHECK(std::abs(to_double((v - expect) / expect)) < 1e-25);
    // 1/agm3(1, s) = 2F1(1/3, 2/3; 1; 1 - s^3) at s = 1/2.
    DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
    DoubleDouble s(0.5);
    DoubleDouble f = hyp_pfq_dd({third, DoubleDouble(2.0) * third}, {1.0}, DoubleDouble(1.0) - s * s * s);
    DoubleDouble g = DoubleDouble(1.0) / agm3_dd(1.0, s);
    CHECK(std::abs(to_double((f - g) / g)) < 1e-25);
    // Bessel series in double-double: J0^2 + 2 sum J_m^2 = 1.
    double x = 3.1;
    DoubleDouble sum = bessel_j_series(0, x) * bessel_j_series(0, x);
    for (int m = 1; m <= 16; ++m) sum += DoubleDouble(2.0) * bessel_j_series(m, x) * bessel_j_series(m, x);
    CHECK(std::abs(to_double(sum - DoubleDouble(1.0))) < 1e-22);
    // String round trip.
    CHECK(std::abs(to_double(dd_from_string("3.14159265358979323846264338327950") - dd_const::pi)) < 1e-31);
}

TEST_CASE("zero-balanced 2F1 continuation near z = 1") {
    for (double z : {0.55, 0.8, 0.95, 0.999}) {
        double direct = hyp_pfq({{1.0 / 3, 2.0 / 3}, {1.0}}, z, {1e-15, 2000000, WorkingMode::double_precision});
        CHECK(rel(hyp2f1_zero_balanced(1.0 / 3, 2.0 / 3, z), direct) < 1e-12);
    }
}

TEST_CASE("logarithmic continuation of 3F2 beyond z = 1") {
    CHECK_THROWS_AS(hyp32_log_continuation(0.9), DomainError);
    double v = hyp32_log_continuation(31.25).value;
    CHECK(2 / (pi * pi) * std::sqrt(15.0) * v == doctest::Approx(0.3299338011).epsilon(1e-9));
    double z = 1e6;
    double c1 = (1.0 / 3) * 0.5 * (2.0 / 3);
    double h = 5 * 1.0 - 2 * 1.5 - 3 * (1 + 0.5 + 1.0 / 3);
    double two = (std::log(108 * z) * (1 + c1 / z) + c1 * h / z) / (2 * std::sqrt(3 * z));
    CHECK(rel(hyp32_log_continuation(z).value, two) < 1e-6);
}

TEST_CASE("gamma family and constants") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
    CHECK(std::abs(gamma_fn(2.0 / 3) * gamma_fn(1.0 / 3) - pi / std::sin(2 * pi / 3)) < 1e-14);
    CHECK_THROWS_AS(gamma_fn(-2.0), PoleError);
    CHECK_THROWS_AS(digamma(0.0), PoleError);
    CHECK(gamma_fn(-1.5) == doctest::Approx(4 * std::sqrt(pi) / 3).epsilon(1e-14));
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic_half(0) == doctest::Approx(2 - 2 * std::log(2.0)).epsilon(1e-15));
    for (unsigned n : {1u, 5u, 17u}) {
        CHECK(rel(harmonic(n), euler_gamma() + digamma(n + 1.0)) < 1e-14);
        CHECK(rel(harmonic_half(n), euler_gamma() + digamma(n + 1.5)) < 1e-14);
    }
    double z3 = 0.0;
    for (int k = 200000; k >= 1; --k) z3 += 1.0 / (static_cast<double>(k) * k * k);
    z3 += 1.0 / (2.0 * 200000.0 * 200000.0);
    CHECK(rel(zeta3(), z3) < 1e-14);
    CHECK(li4_half() == doctest::Approx(0.5174790616738994).epsilon(1e-15));
}

TEST_CASE("Dedekind eta") {
    auto v = dedekind_eta_checked({0.0, 10.0});
    double q24 = std::exp(-2 * pi * 10.0 / 24);
    CHECK(std::abs(v.q_series - 1.0) < 1e-27);
    CHECK(std::abs(v.value - q24) / q24 < 1e-15);
    auto w = dedekind_eta_checked({-0.5, 0.6});
    CHECK(w.self_check < 1e-13);
    CHECK(std::abs(eta_nome_product(1.0) - eta_nome_series(1.0)) < 1e-13);
    CHECK(std::abs(eta_nome(1.0) - eta_nome_product(1.0)) < 1e-13);
    for (double y : {0.5, 1.0, 2.0}) {
        std::complex<double> tau(0.0, y);
        auto lhs = dedekind_eta(-1.0 / tau);
        auto rhs = std::sqrt(std::complex<double>(0, -1) * tau) * dedekind_eta(tau);
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    CHECK_THROWS_AS(dedekind_eta(std::complex<double>(0.3, -0.1)), DomainError);
}

TEST_CASE("oscillatory Bessel product integrals") {
    // int_0^inf J0(t) dt = 1 and int_0^inf J1(t) dt = 1.
    BesselIntegrand a{0.0, {1.0}, {{1.0, {{0, 1.0}}}}};
    CHECK(std::abs(integrate_bessel_product(a).value - 1.0) < 1e-12);
    BesselIntegrand b{0.0, {1.0}, {{1.0, {{1, 1.0}}}}};
    CHECK(std::abs(integrate_bessel_product(b).value - 1.0) < 1e-12);
    // Weber-Schafheitlin: int_0^inf J0(t) J1(t) dt = 1/2.
    BesselIntegrand c{0.0, {1.0}, {{1.0, {{0, 1.0}, {1, 1.0}}}}};
    CHECK(std::abs(integrate_bessel_product(c).value - 0.5) < 1e-12);
    // int_0^inf t^{mu} J0(t) dt = 2^mu G((1+mu)/2) / G((1-mu)/2), mu = -0.3.
    double mu = -0.3;
    BesselIntegrand d{mu, {1.0}, {{1.0, {{0, 1.0}}}}};
    double expect = std::pow(2.0, mu) * gamma_fn((1 + mu) / 2) / gamma_fn((1 - mu) / 2);
    CHECK(std::abs(integrate_bessel_product(d).value - expect) < 1e-12);
    // Log weight is the mu-derivative of the same formula.
    BesselIntegrand e{mu, {0.0, 1.0}, {{1.0, {{0, 1.0}}}}};
    double dexpect = expect * (std::log(2.0) + 0.5 * digamma((1 + mu) / 2) + 0.5 * digamma((1 - mu) / 2));
    CHECK(std::abs(integrate_bessel_product(e).value - dexpect) < 1e-11);
    // Two-step density: x int t J0(xt) J0(t)^2 dt = 2/(pi sqrt(4 - x^2)).
    for (double x : {0.5, 1.3, 1.9}) {
        BesselIntegrand p{1.0, {x}, {{1.0, {{0, x}, {0, 1.0}, {0, 1.0}}}}};
        CHECK(std::abs(integrate_bessel_product(p).value - 2 / (pi * std::sqrt(4 - x * x))) < 1e-11);
    }
    BesselIntegrand sing{1.0, {1.0}, {{1.0, {{0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0}}}}};
    CHECK(integrate_bessel_product(sing).divergent);
}
