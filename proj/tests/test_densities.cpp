#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "walkdens/densities/densities.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/moments/analytic.hpp"
#include "walkdens/moments/residues.hpp"
#include "walkdens/numerics/hypergeometric.hpp"
#include "walkdens/numerics/special.hpp"

using namespace walkdens;
using std::numbers::pi;

namespace {

// int_0^n x^power p_n(x) dx, split at the integers of the parity of n so every panel has at worst
// integrable endpoint singularities.
double density_moment(int n, int power) {
    boost::math::quadrature::tanh_sinh<double> ts(10);
    std::vector<double> cuts{0.0};
    for (int j = n % 2 == 0 ? 2 : 1; j <= n; j += 2) cuts.push_back(j);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto f = [&](double x) {
            const double v = density(n, x).value;
            return std::isfinite(v) ? std::pow(x, power) * v : 0.0;
        };
        total += ts.integrate(f, cuts[i], cuts[i + 1], 1e-10);
    }
    return total;
}

double trinomial_square_sum(int k) {
    // sum_j C(k, j)^2 C(2j, j)
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
        double ckj = 1.0;
        for (int i = 0; i < j; ++i) ckj = ckj * (k - i) / (i + 1);
        double c2 = 1.0;
        for (int i = 0; i < j; ++i) c2 = c2 * (2 * j - i) / (i + 1);
        s += ckj * ckj * c2;
    }
    return s;
}

double p4_at_two_gamma() {
    return std::pow(2.0, 7.0 / 3.0) * pi / (3.0 * std::sqrt(3.0)) * std::pow(std::tgamma(2.0 / 3.0), -6.0);
}

}  // namespace

TEST_CASE("two-step densities") {
    CHECK(p2(1.0).value == doctest::Approx(2.0 / (pi * std::sqrt(3.0))).epsilon(1e-15));
    const EvalResult edge = p2(2.0);
    CHECK(std::isinf(edge.value));
    CHECK(edge.singular);
    CHECK(p2(2.5).value == 0.0);
    CHECK(p2(-0.1).value == 0.0);
    CHECK(p2_two_step(2.0, 1.0, 2.0).value == doctest::Approx(4.0 / (pi * std::sqrt(15.0))).epsilon(1e-15));
    CHECK(p2_two_step(1.0, 1.0, 1.0).value == doctest::Approx(p2(1.0).value).epsilon(1e-15));
    CHECK(p2_two_step(0.5, 1.0, 2.0).value == 0.0);
    CHECK(std::isinf(p2_two_step(1.0, 1.0, 2.0).value));
    CHECK_THROWS_AS(p2_two_step(1.0, 0.0, 1.0), InvalidParameter);
    for (double x : {0.3, 1.1, 1.9}) CHECK(p2_two_step(x, 1.0, 1.0).value == doctest::Approx(p2(x).value).epsilon(1e-14));
}

TEST_CASE("p3 special values") {
    CHECK(p3(3.0).value == doctest::Approx(std::sqrt(3.0) / (2.0 * pi)).epsilon(1e-14));
    const double v = p3(std::sqrt(3.0)).value;
    CHECK(std::abs(v * v - 3.0 / (2.0 * pi * pi) * w3(-1.0).value) < 1e-10);
    const double x = 0.25, y = (3.0 - x) / (1.0 + x);
    CHECK(std::abs(p3(x).value - 4.0 * x / ((3.0 - x) * (1.0 + x)) * p3(y).value) < 1e-11);
    for (double t : {0.1, 0.6, 0.9})
        CHECK(std::abs(p3(t).value - 4.0 * t / ((3.0 - t) * (1.0 + t)) * p3((3.0 - t) / (1.0 + t)).value) < 1e-12);
    CHECK(p3(3.5).value == 0.0);
    CHECK(p3(0.0).value == 0.0);
}

TEST_CASE("p3 representations agree") {
    double worst_agm = 0.0, worst_ell = 0.0, worst_series = 0.0, worst_quad = 0.0;
    for (int i = 1; i < 60; ++i) {
        const double x = 0.05 * i;
        if (std::abs(x - 1.0) < 0.05) continue;
        const double h = p3(x, P3Method::hyper).value;
        worst_agm = std::max(worst_agm, std::abs(h - p3(x, P3Method::agm).value));
        worst_ell = std::max(worst_ell, std::abs(h - p3(x, P3Method::elliptic).value));
        worst_series = std::max(worst_series, std::abs(h - p3(x, P3Method::series).value));
        worst_quad = std::max(worst_quad, std::abs(h - pn_quadrature(3, x).value));
    }
    CHECK(worst_agm < 1e-11);
    CHECK(worst_ell < 1e-9);
    CHECK(worst_series < 1e-12);
    CHECK(worst_quad < 1e-10);
}

TEST_CASE("p3 near its logarithmic singularity") {
    const EvalResult at1 = p3(1.0);
    CHECK(std::isinf(at1.value));
    CHECK(at1.singular);
    for (double d : {5e-4, -5e-4, 1e-6, -1e-6}) {
        const EvalResult r = p3(1.0 + d);
        CHECK(r.method == DensityMethod::asym_edge);
        CHECK(r.singular);
        CHECK(std::abs(r.value - p3(1.0 + d, P3Method::agm).value) < 1e-11);
        CHECK(std::abs(r.value - pn_quadrature(3, 1.0 + d).value) < 1e-10);
        // The O(1) remainder of the leading logarithm vanishes at 1.
        const double lead = 3.0 / (2.0 * pi * pi) * std::log(4.0 / std::abs(d));
        CHECK(std::abs(r.value - lead) < 20.0 * std::abs(d) * std::log(1.0 / std::abs(d)));
    }
    CHECK(p3(0.5).method == DensityMethod::series0);
    CHECK(p3(2.0).method == DensityMethod::closed_form);
    // Seam of the automatic dispatch.
    CHECK(std::abs(p3(0.8).value - p3(std::nextafter(0.8, 1.0)).value) < 1e-12);
}

TEST_CASE("p4 special values") {
    const EvalResult two = p4(2.0);
    CHECK(two.method == DensityMethod::quadrature);
    CHECK(std::abs(two.value - p4_at_two_gamma()) < 1e-9);
    CHECK(std::abs(p4(1.0).value - 0.3299338011) < 1e-10);
    CHECK(std::abs(p4(1.0).value - r50_gamma_quotient()) < 1e-13);
    CHECK(p4(4.0).value == 0.0);
    CHECK_THROWS_AS(p4(2.0, P4Method::hyper), MethodUnavailable);
    CHECK_THROWS_AS(p4(2.5, P4Method::series0), MethodUnavailable);
}

TEST_CASE("p4 routes agree with Bessel quadrature") {
    for (double x : {0.5, 1.0, 1.5, 2.5, 3.0, 3.5})
        CHECK(std::abs(p4(x, P4Method::hyper).value - pn_quadrature(4, x).value) < 1e-12);
    for (double x : {0.2, 0.9, 1.4, 1.8}) CHECK(std::abs(p4(x, P4Method::series0).value - pn_quadrature(4, x).value) < 1e-12);
    // Seams of the automatic dispatch, approached from both sides.
    for (double s : {1.5, 1.95, 2.05, 3.999}) {
        const double lo = p4(std::nextafter(s, 0.0)).value, hi = p4(std::nextafter(s, 4.0)).value;
        CHECK(std::abs(lo - hi) < 1e-11);
    }
    CHECK(p4(1.0).method == DensityMethod::series0);
    CHECK(p4(1.7).method == DensityMethod::log_continuation);
    CHECK(p4(1.97).method == DensityMethod::quadrature);
    CHECK(p4(3.0).method == DensityMethod::closed_form);
    CHECK(p4(3.9995).method == DensityMethod::asym_edge);
    CHECK(std::abs(p4(3.9995).value - pn_quadrature(4, 3.9995).value) < 1e-12);
}

TEST_CASE("p4 expansion at 4") {
    const double c = std::sqrt(2.0) / (pi * pi);
    // Fitted coefficient of (4-x)^(5/2) after removing the two leading terms.
    const double u = 0.01;
    const double p = p4(4.0 - u, P4Method::hyper).value;
    const double fitted = (p - c * std::sqrt(u) - 3.0 / 16.0 * c * std::pow(u, 1.5)) / std::pow(u, 2.5);
    const double expected = 23.0 / 512.0 * c;
    CHECK(std::abs(fitted - expected) < 0.5 * expected);
    // The (4-x)^(3/2) coefficient enters with a plus sign; with a minus sign the remainder would be
    // of order u^(3/2), not u^(5/2).
    const double wrong = (p - c * std::sqrt(u) + 3.0 / 16.0 * c * std::pow(u, 1.5)) / std::pow(u, 2.5);
    CHECK(std::abs(wrong - expected) > 10.0 * expected);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = 4.0 - 0.1 * std::pow(0.9, i);
        const double v = 4.0 - x;
        const double three = c * (std::sqrt(v) + 3.0 / 16.0 * std::pow(v, 1.5) + 23.0 / 512.0 * std::pow(v, 2.5));
        worst = std::max(worst, std::abs(p4(x).value - three) / (2.0 * expected * std::pow(v, 2.5)));
    }
    CHECK(worst <= 1.0);
    for (double v : {1e-3, 1e-4}) {
        const double q = pn_quadrature(4, 4.0 - v).value;
        const double second = (q - c * std::sqrt(v)) / std::pow(v, 1.5);
        CHECK(std::abs(second - 3.0 / 16.0 * c) < 0.05 * c);
    }
}

TEST_CASE("p4 derivative at 2") {
    auto f = [](double x) { return p4(x).value; };
    // sqrt(x - 2) p4'(x) at x = 2 + 10^-j, extrapolated linearly in sqrt(x - 2).
    std::vector<double> r, g;
    for (int j = 2; j <= 4; ++j) {
        const double d = std::pow(10.0, -j);
        const double x = 2.0 + d;
        const double h = d / 20.0;
        const double deriv = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
        r.push_back(std::sqrt(d));
        g.push_back(std::sqrt(d) * deriv);
    }
    // Quadratic through the three points, evaluated at 0.
    const double l0 = r[1] * r[2] / ((r[0] - r[1]) * (r[0] - r[2]));
    const double l1 = r[0] * r[2] / ((r[1] - r[0]) * (r[1] - r[2]));
    const double l2 = r[0] * r[1] / ((r[2] - r[0]) * (r[2] - r[1]));
    const double limit = l0 * g[0] + l1 * g[1] + l2 * g[2];
    CHECK(std::abs(limit + 2.0 / (pi * pi)) < 1e-4);

    // Left derivative by one-sided differences with Richardson extrapolation.
    auto left = [&](double h) { return (3 * f(2.0) - 4 * f(2.0 - h) + f(2.0 - 2 * h)) / (2 * h); };
    const double h = 2e-3;
    const double d1 = left(h), d2 = left(h / 2), d3 = left(h / 4);
    const double e12 = (4 * d2 - d1) / 3, e23 = (4 * d3 - d2) / 3;
    const double rich = (8 * e23 - e12) / 7;
    const double f32 = hyp_pfq({{-0.5, 1.0 / 3.0, 2.0 / 3.0}, {1.0, 1.0}}, 1.0);
    const double closed = std::sqrt(3.0) / pi * f32 - 2.0 / 3.0 * p4_at_two_gamma();
    CHECK(std::abs(rich - closed) < 1e-6);
}

TEST_CASE("p4 modular parameterisation") {
    CHECK(p4_modular_check(1.0) < 1e-9);
    CHECK(p4_modular_check(2.0) < 1e-10);
    CHECK(p4_modular_check(0.5) < 1e-9);
    const ModularSides s = p4_modular_sides(std::sqrt(5.0 / 3.0) / 2.0);
    CHECK(std::abs(s.argument - 1.0) < 1e-12);
    CHECK(std::abs(s.rhs - r50_gamma_quotient()) < 1e-12);
    CHECK(std::abs(p4_modular_sides(0.6455).argument - 1.0) < 1e-4);
    // The argument stays inside (0, 2) for every y > 0, peaking near y = 0.3.
    CHECK(p4_modular_check(0.3) < 1e-9);
    CHECK(p4_modular_check(0.1) < 1e-9);
    CHECK_THROWS_AS(p4_modular_sides(0.0), DomainError);
}

TEST_CASE("p5 near zero and in the interior") {
    const double r50 = r50_gamma_quotient();
    CHECK(std::abs(p5(1e-4).value / 1e-4 - 0.329934) < 5e-7);
    CHECK(std::abs(p5(1e-4).value / 1e-4 - r50) < 1e-8);
    // Printed coefficients for the first three terms, the remaining ones from the residue table.
    const ResidueTable t = residues(5, 40);
    double partial = 0.329934 * 0.5 + 0.00661673 * 0.125 + 0.000262333 * 0.03125;
    for (int k = 3; k < 40; ++k) partial += t.r5[k] * std::pow(0.5, 2 * k + 1);
    const double quad = pn_quadrature(5, 0.5).value;
    CHECK(std::abs(partial - quad) < 1e-7);
    CHECK(std::abs(p5(0.5).value - quad) < 1e-13);
    CHECK(p5(0.5).method == DensityMethod::series0);
    CHECK(p5(2.0).method == DensityMethod::quadrature);
    CHECK(p5(1.0005).singular);
    CHECK(p5(2.9995).singular);
    CHECK_THROWS_AS(p5(1.5, P5Method::series0), MethodUnavailable);
    // Past 1 the small-x series continues a different function.
    CHECK(std::abs(series_at_zero(5, 200).eval(1.5) - p5(1.5).value) > 0.1);
    const double tail = p5(4.999).value;
    CHECK(tail > 0.0);
    CHECK(tail < 1e-3);
    CHECK(std::abs(p5(1.0, P5Method::series0).value - p5(1.0, P5Method::quadrature).value) < 1e-12);
}

TEST_CASE("p5 over x is nearly constant on [0, 1]") {
    double prev = 0.0;
    bool increasing = true;
    for (int i = 1; i <= 100; ++i) {
        const double x = 0.01 * i;
        const double v = p5(x).value / x;
        if (i > 1 && !(v > prev)) increasing = false;
        prev = v;
    }
    CHECK(increasing);
    const double spread = p5(1.0).value - r50_gamma_quotient();
    CHECK(spread > 0.006);
    CHECK(spread < 0.008);
}

TEST_CASE("Bessel quadrature of the densities") {
    CHECK(std::abs(pn_quadrature(2, 1.0).value - p2(1.0).value) < 1e-8);
    CHECK(std::abs(pn_quadrature(3, 1.5).value - p3(1.5, P3Method::agm).value) < 1e-8);
    CHECK(std::isinf(pn_quadrature(2, 2.0).value));
    CHECK(pn_quadrature(6, 6.5).value == 0.0);
    CHECK_THROWS_AS(pn_quadrature(1, 0.5), DomainError);
    CHECK_THROWS_AS(pn_quadrature(4, 0.0), DomainError);
    for (int n : {3, 4, 5, 6, 7})
        for (double x : {0.3, 1.7, 2.2})
            CHECK(pn_quadrature(n, x).err >= 0.0);
}

TEST_CASE("normalisation and second moments") {
    for (int n = 2; n <= 6; ++n) {
        CAPTURE(n);
        CHECK(std::abs(density_moment(n, 0) - 1.0) < 1e-6);
        if (n >= 3) CHECK(std::abs(density_moment(n, 2) - n) < 1e-6);
    }
    CHECK(std::abs(density_moment(4, 4) - 28.0) < 1e-6);
}

TEST_CASE("convolution recursion") {
    for (double x : {0.5, 2.0, 2.9}) CHECK(std::abs(pn_convolution(3, x).value - p3(x, P3Method::elliptic).value) < 1e-8);
    CHECK(std::abs(pn_convolution(4, 3.5).value - p4(3.5, P4Method::hyper).value) < 1e-7);
    CHECK(std::abs(pn_convolution(5, 0.5).value - p5(0.5, P5Method::series0).value) < 1e-6);
    CHECK(std::abs(pn_convolution(4, 1.0).value - r50_gamma_quotient()) < 1e-10);
    CHECK(std::abs(pn_convolution(6, 2.5).value - pn_quadrature(6, 2.5).value) < 1e-8);
    CHECK(pn_convolution(4, 4.5).value == 0.0);
    CHECK(pn_convolution(4, 2.0).method == DensityMethod::convolution);
    CHECK_THROWS_AS(pn_convolution(7, 1.0), DomainError);
}

TEST_CASE("Rayleigh limit") {
    CHECK(rayleigh(5, 0.0) == 0.0);
    for (int n : {3, 8, 20}) {
        const double xm = std::sqrt(n / 2.0);
        CHECK(rayleigh(n, xm) == doctest::Approx(std::sqrt(2.0 / (std::exp(1.0) * n))).epsilon(1e-14));
        CHECK(rayleigh(n, xm) > rayleigh(n, xm * 1.01));
        CHECK(rayleigh(n, xm) > rayleigh(n, xm * 0.99));
    }
    double sup = 0.0;
    for (int i = 1; i < 160; ++i) {
        const double x = 0.05 * i;
        sup = std::max(sup, std::abs(pn_quadrature(8, x).value - rayleigh(8, x)));
    }
    // Attained near x = 3.5, where p8 = 0.2014 against a Rayleigh value of 0.1893; a direct simulation
    // with 4e7 walks gives 0.2011 +- 0.0002 for the bin [3.45, 3.55].
    CHECK(sup > 0.011);
    CHECK(sup < 0.013);
    CHECK_THROWS_AS(rayleigh(0, 1.0), InvalidParameter);
}

TEST_CASE("series at zero") {
    const LogPowerSeries& s4 = series_at_zero(4, 50);
    CHECK(s4.b[0] == doctest::Approx(-3.0 / (2.0 * pi * pi)).epsilon(1e-13));
    CHECK(s4.a[0] == doctest::Approx(9.0 / (2.0 * pi * pi) * std::log(2.0)).epsilon(1e-13));
    CHECK(s4.a.size() == 50);
    CHECK(std::abs(s4.a[40] / s4.a[39] - 0.25) < 0.01);
    CHECK(s4.eval(0.7) == doctest::Approx(pn_quadrature(4, 0.7).value).epsilon(1e-12));
    const LogPowerSeries& s5 = series_at_zero(5, 30);
    for (double b : s5.b) CHECK(b == 0.0);
    CHECK(std::abs(s5.a[25] / s5.a[24] - 1.0 / 9.0) < 0.01);
    const LogPowerSeries& s3 = series_at_zero(3, 120);
    const double c = 2.0 / (pi * std::sqrt(3.0));
    for (int k = 0; k <= 2; ++k) CHECK(s3.a[k] == doctest::Approx(c * trinomial_square_sum(k) / std::pow(9.0, k)).epsilon(1e-14));
    CHECK(std::abs(s3.a[119] / s3.a[118] - 1.0) < 0.02);
    CHECK(s3.radius == 1.0);
    CHECK(s4.radius == 2.0);
    CHECK(s5.radius == 3.0);
    CHECK(&series_at_zero(4, 50) == &s4);
    CHECK_THROWS_AS(series_at_zero(4, 201), GuardExceeded);
    CHECK_THROWS_AS(series_at_zero(6, 10), DomainError);
}

TEST_CASE("density method names round-trip") {
    for (auto m : {DensityMethod::closed_form, DensityMethod::series0, DensityMethod::log_continuation,
                   DensityMethod::quadrature, DensityMethod::convolution, DensityMethod::asym_edge})
        CHECK(parse_density_method(to_string(m)) == m);
    CHECK(parse_p4_method("asym4") == P4Method::asym4);
    CHECK_THROWS_AS(parse_p3_method("bogus"), InvalidParameter);
}

TEST_CASE("moments by quadrature of the density") {
    for (auto [n, s] : {std::pair{3, 1.0}, {4, 1.0}, {4, -1.5}, {5, 1.0}}) {
        CAPTURE(n);
        const MomentValue q = density_moment(n, s);
        CHECK(q.method == MomentMethod::quadrature_of_density);
        CHECK(std::abs(q.value - moment(n, s).value) <= q.err + 1e-13);
    }
    // Two steps: W_2(1) = 4/pi, with the inverse square root at 2 costing digits.
    const MomentValue two = density_moment(2, 1.0);
    CHECK(std::abs(two.value - 4.0 / pi) <= two.err);
    CHECK_THROWS_AS(density_moment(3, -2.0), DomainError);
    CHECK_THROWS_AS(density_moment(2, -1.0), DomainError);
    CHECK_THROWS_AS(density_moment(1, 1.0), DomainError);
}

TEST_CASE("dispatch seams move work without changing values") {
    const DispatchSeams saved = dispatch_seams();
    const double before = p4(1.2).value;
    CHECK(p4(1.2).method == DensityMethod::series0);
    DispatchSeams s = saved;
    s.p4_series_limit = 1.0;
    s.p3_series_limit = 0.5;
    set_dispatch_seams(s);
    CHECK(p4(1.2).method != DensityMethod::series0);
    CHECK(std::abs(p4(1.2).value - before) < 1e-13);
    CHECK(p3(0.6).method == DensityMethod::closed_form);
    s.p4_series_limit = 2.5;
    CHECK_THROWS_AS(set_dispatch_seams(s), InvalidParameter);
    set_dispatch_seams(saved);
    CHECK(dispatch_seams().p4_series_limit == 1.5);
}
