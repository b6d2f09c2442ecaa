#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "walkdens/errors.hpp"
#include "walkdens/moments/analytic.hpp"
#include "walkdens/moments/derivatives.hpp"
#include "walkdens/moments/exact.hpp"
#include "walkdens/moments/residues.hpp"
#include "walkdens/numerics/bessel_integral.hpp"
#include "walkdens/numerics/quadrature.hpp"
#include "walkdens/numerics/special.hpp"

using namespace walkdens;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Sum of multinomial(k; a)^2 over all compositions a of k into n parts, by explicit enumeration.
Integer brute_even_moment(int n, int k) {
    Integer total = 0;
    Integer kfact = factorial(k);
    std::function<void(int, int, Integer)> rec = [&](int part, int left, Integer denom) {
        if (part == n - 1) {
            Integer d = denom * factorial(left);
            Integer m = kfact / d;
            total += m * m;
            return;
        }
        for (int v = 0; v <= left; ++v) rec(part + 1, left - v, denom * factorial(v));
    };
    rec(0, k, Integer(1));
    return total;
}

// int_0^inf J_0(t)^n dt, which equals W_n(-1).
double j0_power_integral(int n) {
    BesselIntegrand in;
    BesselProduct p;
    for (int i = 0; i < n; ++i) p.factors.push_back({0, 1.0});
    in.products.push_back(p);
    return integrate_bessel_product(in).value;
}

Poly poly(std::vector<long> c) {
    std::vector<Rational> r(c.begin(), c.end());
    return Poly(std::move(r));
}

}  // namespace

TEST_CASE("even moments match composition enumeration") {
    const long w3[] = {1, 3, 15, 93};
    const long w4[] = {1, 4, 28, 256};
    for (int k = 0; k < 4; ++k) {
        CHECK(brute_even_moment(3, k) == w3[k]);
        CHECK(brute_even_moment(4, k) == w4[k]);
        CHECK(even_moment_exact(3, k) == w3[k]);
        CHECK(even_moment_exact(4, k) == w4[k]);
    }
    for (int n = 2; n <= 8; ++n) CHECK(even_moment_exact(n, 1) == n);
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= 9; ++k) CHECK(even_moment_exact(n, k) == brute_even_moment(n, k));
    CHECK(even_moment_sequence(7, 12)[12] == brute_even_moment(7, 12));
}

TEST_CASE("even_moment_exact guard") {
    CHECK_THROWS_AS(even_moment_exact(11, 3), GuardExceeded);
    CHECK_THROWS_AS(even_moment_exact(3, 31), GuardExceeded);
    CHECK_THROWS_AS(even_moment_exact(0, 3), DomainError);
    CHECK_NOTHROW(even_moment_sequence(11, 40));
}

TEST_CASE("verrill operator for three and four steps") {
    auto op3 = verrill_operator(3);
    REQUIRE(op3.order() == 2);
    CHECK(op3.coeffs[0] == Poly(Rational(9)) * poly({1, 1}) * poly({1, 1}));
    CHECK(op3.coeffs[1] == poly({-23, -30, -10}));
    CHECK(op3.coeffs[2] == poly({2, 1}) * poly({2, 1}));
    // (s+4)^2 W(s+4) - 2(5s^2+30s+46) W(s+2) + 9(s+2)^2 W(s) at s = 0.
    CHECK(16 * 15 - 92 * 3 + 36 == 0);

    auto op4 = verrill_operator(4);
    REQUIRE(op4.order() == 2);
    CHECK(op4.coeffs[0] == Poly(Rational(64)) * poly({1, 1}).pow(3));
    CHECK(op4.coeffs[1] == poly({-72, -138, -90, -20}));
    CHECK(op4.coeffs[2] == poly({2, 1}).pow(3));
    CHECK(64 * 28 - 576 * 4 + 512 * 1 == 0);
}

TEST_CASE("verrill operators annihilate the even moments") {
    for (int n = 1; n <= 8; ++n) {
        auto op = verrill_operator(n);
        CHECK(op.order() == (n + 1) / 2);
        CHECK(op.max_degree() == n - 1);
        CHECK_FALSE(op.coeffs.back().is_zero());
        std::vector<Integer> w;
        for (int k = 0; k <= 20; ++k) w.push_back(even_moment_exact(n, k));
        for (int k = 0; k + op.order() <= 20; ++k) CHECK(op.apply(w, k) == 0);
    }
}

TEST_CASE("characteristic polynomial equals the product of (x - m^2)") {
    CHECK(char_poly(3) == poly({9, -10, 1}));
    CHECK(char_poly(4) == poly({64, -20, 1}));
    for (int n = 1; n <= 200; ++n) CHECK(char_poly(n) == char_poly_product(n));
    for (int n : {5, 10, 17, 24}) CHECK(leading_char_poly(verrill_operator(n)) == char_poly(n));
}

TEST_CASE("w3 special values and dual representations") {
    CHECK(w3(0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w3(2).value == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(w3(4).value == doctest::Approx(15.0).epsilon(1e-13));
    CHECK(w3(1).method == MomentMethod::hyp_single);
    for (double s : {-1.5, -0.5, 0.5, 1.5, 2.5}) CHECK(std::abs(w3(s).value - w3_two_term(s).value) < 1e-10);
    for (double s : {-1.0, 0.5, 2.0}) CHECK(std::abs(bessel_moment(3, s).value - w3(s).value) < 1e-8);
    CHECK(rel(w3(-1).value, w3_neg_odd(0).value) < 1e-13);
    CHECK(std::abs(w3_neg_odd(0).value - j0_power_integral(3)) < 1e-8);
    CHECK(std::abs(bessel_moment(3, -1).value - w3_neg_odd(0).value) < 1e-9);
    CHECK_THROWS_AS(w3(-2), PoleError);
    CHECK_THROWS_AS(w3(-4), PoleError);
}

TEST_CASE("two-term forms") {
    CHECK(std::abs(w3_two_term(2).value - 3.0) < 1e-12);
    CHECK(std::abs(w4_two_term(2).value - 4.0) < 1e-12);
    CHECK(std::abs(w4_two_term(0.5).value - bessel_moment(4, 0.5).value) < 1e-10);
    CHECK(std::abs(w4_two_term(-0.5).value - bessel_moment(4, -0.5).value) < 1e-9);
    CHECK(w4_two_term(2).method == MomentMethod::hyp_two_term);
    CHECK_THROWS_AS(w3_two_term(1), DomainError);
    CHECK_THROWS_AS(w4_two_term(-3), DomainError);
    CHECK_THROWS_AS(w3_two_term(-2), PoleError);
    CHECK_THROWS_AS(w4_two_term(-1.5), DomainError);
}

TEST_CASE("w3 at negative odd integers") {
    // (s+4)^2 W(s+4) - 2(5s^2+30s+46) W(s+2) + 9(s+2)^2 W(s) at s = -3.
    double resid = w3(1).value - 2.0 * w3_neg_odd(0).value + 9.0 * w3_neg_odd(1).value;
    CHECK(std::abs(resid) < 1e-11);
    double ratio = w3_neg_odd(6).value / w3_neg_odd(5).value;
    CHECK(ratio > 1.0 / 15.0);
    CHECK(ratio < 1.0 / 5.0);
    for (int k = 0; k < 8; ++k) CHECK(w3_neg_odd(k).value > 0.0);
    CHECK_THROWS_AS(w3_neg_odd(-1), DomainError);
}

TEST_CASE("functional-equation continuation") {
    CHECK(std::abs(continue_by_functional_eq(3, -3).value - w3_neg_odd(1).value) < 1e-11);
    CHECK(std::abs(continue_by_functional_eq(3, -5).value - w3_neg_odd(2).value) < 1e-11);
    CHECK(continue_by_functional_eq(3, -3).method == MomentMethod::functional_eq);
    for (int k = 1; k <= 3; ++k) {
        double up = bessel_moment(4, 2.0 * k - 1).value;
        double down = continue_by_functional_eq(4, -2.0 * k - 1).value;
        CHECK(std::abs(down * std::pow(2.0, 6 * k) - up) < 1e-9 * std::abs(up));
    }
    double w5m1 = continue_by_functional_eq(5, -1).value;
    CHECK(std::isfinite(w5m1));
    CHECK(std::abs(w5m1 - j0_power_integral(5)) < 1e-6);
    CHECK_THROWS_AS(continue_by_functional_eq(4, -2), PoleError);
    CHECK_THROWS_AS(continue_by_functional_eq(5, -6), PoleError);
    CHECK_THROWS_AS(continue_by_functional_eq(9, 1), DomainError);
}

TEST_CASE("double pole of W4 at -2") {
    // (s+2)^2 W_4(s) along s = -2 + 10^-j, j = 2..4, extrapolated by the quadratic through the three points.
    std::vector<double> e{1e-2, 1e-3, 1e-4}, f;
    for (double h : e) f.push_back(h * h * continue_by_functional_eq(4, -2.0 + h).value);
    double lim = 0.0;
    for (int i = 0; i < 3; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) w *= e[j] / (e[j] - e[i]);
        lim += w * f[i];
    }
    CHECK(std::abs(lim - 3.0 / (2.0 * pi * pi)) < 1e-6);
    CHECK(std::abs(f[2] - 3.0 / (2.0 * pi * pi)) > 1e-6);
}

TEST_CASE("bessel_moment") {
    CHECK(std::abs(bessel_moment(4, 0).value - 1.0) < 1e-9);
    CHECK(std::abs(bessel_moment(4, 2).value - 4.0) < 1e-9);
    CHECK(std::abs(bessel_moment(3, 4).value - 15.0) < 1e-8);
    CHECK(std::abs(bessel_moment(4, -1).value - j0_power_integral(4)) < 1e-7);
    CHECK(bessel_moment(4, 1).err >= 0.0);
    // Close to the pole at -2 the integrand's mass sits at t far below 1e-100.
    for (int n : {3, 4})
        for (double s : {-1.99, -1.999}) {
            const MomentValue b = bessel_moment(n, s), f = continue_by_functional_eq(n, s);
            CHECK(std::abs(b.value - f.value) <= b.err + f.err);
            CHECK(rel(b.value, f.value) < 1e-9);
        }
    CHECK_THROWS_AS(bessel_moment(4, -2), DomainError);
    CHECK_THROWS_AS(bessel_moment(5, 1), DomainError);
}

TEST_CASE("bessel_form_moment agrees with the exact even moments") {
    for (int n = 3; n <= 7; ++n)
        for (int k = 0; k <= 3; ++k) {
            double exact = even_moment_exact(n, k).get_d();
            CHECK(rel(bessel_form_moment(n, 2.0 * k).value, exact) < 1e-11);
        }
    CHECK(rel(bessel_form_moment(4, 1).value, bessel_moment(4, 1).value) < 1e-11);
    // Continuity across the switch of the derivative order k.
    CHECK(rel(bessel_form_moment(5, 1.999).value, bessel_form_moment(5, 2.001).value) < 2e-3);
}

TEST_CASE("moment dispatcher") {
    CHECK(moment(3, 4).method == MomentMethod::exact_combinatorial);
    CHECK(moment(3, 4).value == 15.0);
    CHECK(moment(2, 1).value == doctest::Approx(4.0 / pi).epsilon(1e-14));
    CHECK(moment(1, 3.7).value == 1.0);
    CHECK(rel(moment(3, 1).value, bessel_moment(3, 1).value) < 1e-12);
    CHECK(rel(moment(4, 1).value, bessel_moment(4, 1).value) < 1e-12);
    CHECK(rel(moment(4, -1.5).value, bessel_moment(4, -1.5).value) < 1e-12);
    CHECK(moment(5, -3).method == MomentMethod::functional_eq);
    CHECK_THROWS_AS(moment(4, -2), PoleError);
    CHECK_THROWS_AS(moment(2, -1), PoleError);
    for (auto m : {MomentMethod::hyp_single, MomentMethod::functional_eq, MomentMethod::monte_carlo})
        CHECK(parse_moment_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_moment_method("nope"), InvalidParameter);
}

TEST_CASE("first derivatives") {
    auto fd = [](const std::function<double(double)>& f, double x) { return stencil_derivative(f, x, 1, 0.05); };
    auto w3f = [](double s) { return w3(s).value; };
    auto w4f = [](double s) { return w4_two_term(s).value; };
    CHECK(std::abs(wn_prime(3, 0, DerivMethod::closed_form).value - clausen(pi / 3) / pi) < 1e-15);
    CHECK(std::abs(wn_prime(3, 0, DerivMethod::closed_form).value - fd(w3f, 0.0)) < 1e-7);
    CHECK(std::abs(wn_prime(3, 2, DerivMethod::closed_form).value - fd(w3f, 2.0)) < 1e-7);
    CHECK(std::abs(wn_prime(4, 0, DerivMethod::closed_form).value - fd(w4f, 0.0)) < 1e-7);
    CHECK(std::abs(wn_prime(4, 2, DerivMethod::closed_form).value - fd(w4f, 2.0)) < 1e-7);
    CHECK(std::abs(wn_prime(3, 4, DerivMethod::closed_form).value - fd(w3f, 4.0)) < 1e-6);
    for (int n : {3, 4})
        for (double at : {0.0, 2.0, 4.0})
            CHECK(rel(wn_prime(n, at, DerivMethod::bessel).value, wn_prime(n, at, DerivMethod::closed_form).value) < 1e-11);
    CHECK(std::abs(wn_prime(4, 0, DerivMethod::closed_form).value - 0.426280) < 5e-6);
    CHECK(std::abs(wn_prime(5, 0, DerivMethod::bessel).value - 0.54441256) < 5e-9);
    CHECK_THROWS_AS(wn_prime(5, 0, DerivMethod::closed_form), MethodUnavailable);
    CHECK_THROWS_AS(wn_prime(4, 2, DerivMethod::series_log), MethodUnavailable);
    CHECK_THROWS_AS(wn_prime(4, 1, DerivMethod::bessel), DomainError);
}

TEST_CASE("series for the first derivative at zero") {
    for (int n = 3; n <= 6; ++n) {
        double ref = wn_prime(n, 0, DerivMethod::bessel).value;
        for (auto m : {DerivMethod::series_log, DerivMethod::series_laguerre}) {
            auto v = wn_prime(n, 0, m);
            CHECK(v.err > 0.0);
            CHECK(std::abs(v.value - ref) <= v.err);
        }
        CHECK(std::abs(wn_prime(n, 0, DerivMethod::series_log).value - ref) < 2e-6);
    }
}

TEST_CASE("second derivatives") {
    auto fd2 = [](const std::function<double(double)>& f, double x) { return stencil_derivative(f, x, 2, 0.05); };
    auto w3f = [](double s) { return w3(s).value; };
    auto w4f = [](double s) { return w4_two_term(s).value; };
    CHECK(std::abs(wn_doubleprime(4, 0).value - fd2(w4f, 0.0)) < 1e-7);
    CHECK(std::abs(wn_doubleprime(3, 0).value - fd2(w3f, 0.0)) < 1e-7);
    CHECK(std::abs(wn_doubleprime(4, 2).value - fd2(w4f, 2.0)) < 1e-7);
    CHECK(std::abs(wn_doubleprime(3, 2).value - fd2(w3f, 2.0)) < 1e-7);
    CHECK(rel(wn_doubleprime(4, 0).value, bessel_form_moment(4, 0, 2).d2) < 1e-11);
    CHECK(rel(wn_doubleprime(3, 0).value, bessel_form_moment(3, 0, 2).d2) < 1e-11);
    CHECK_THROWS_AS(wn_doubleprime(5, 0), DomainError);
}

TEST_CASE("residues from derivatives") {
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w3_res2) - 2.0 / (std::sqrt(3.0) * pi)) < 1e-12);
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w3_res2) - 0.3675525969) < 1e-10);
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w4_coeff2) - 3.0 / (2.0 * pi * pi)) < 1e-9);
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w4_res2) - 9.0 * std::log(2.0) / (2.0 * pi * pi)) < 1e-9);
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w5_res2) - r50_gamma_quotient()) < 1e-10);
    CHECK(std::abs(residue_from_derivatives(ResidueQuantity::w5_res4) - r51_conjectural()) < 1e-9);
}

TEST_CASE("residue tables") {
    auto t5 = residues(5, 20);
    REQUIRE(t5.r5.size() == 20);
    CHECK(t5.r5_seed_conjectural);
    CHECK(std::abs(t5.r5[0] - 0.3299338011) < 5e-11);
    CHECK(std::abs(t5.r5[1] - 0.006616730259) < 5e-13);
    // Six significant digits: agreement to a relative 1e-5.
    CHECK(rel(t5.r5[2], 0.000262333) < 1e-5);
    CHECK(rel(t5.r5[3], 0.0000141185) < 1e-5);
    for (double r : t5.r5) CHECK(r > 0.0);
    CHECK(std::abs(t5.r5[15] / t5.r5[14] * 9.0 - 1.0) < 0.2);
    CHECK(std::abs(r50_chowla_selberg() - r50_gamma_quotient()) < 1e-10);

    // Seed-free solution of the same recurrence.
    auto bvp = r5_boundary_solution(60);
    for (int k = 1; k < 10; ++k) CHECK(rel(bvp[k], t5.r5[k]) < 1e-9);

    // Residues of W_5 at -2k from the combinatorial functional equation, by symmetric limits.
    for (int k = 1; k <= 3; ++k) {
        auto f = [&](double e) {
            return 0.5 * e * (continue_by_functional_eq(5, -2.0 * k + e).value - continue_by_functional_eq(5, -2.0 * k - e).value);
        };
        double lim = (4.0 * f(5e-3) - f(1e-2)) / 3.0;
        CHECK(rel(lim, t5.r5[k - 1]) < 1e-7);
    }

    auto t4 = residues(4, 200);
    REQUIRE(t4.s4.size() == 200);
    CHECK(std::abs(t4.r4[0] - 9.0 * std::log(2.0) / (2.0 * pi * pi)) < 1e-15);
    auto W = even_moment_sequence(4, 10);
    for (int k = 0; k <= 10; ++k)
        CHECK(std::abs(t4.s4[k] - 3.0 / (2.0 * pi * pi) * W[k].get_d() / std::pow(8.0, 2 * k)) < 1e-12);
    // Laurent data of W_4 at -4 from the functional equation.
    auto g = [](double e) { return e * e * continue_by_functional_eq(4, -4.0 + e).value; };
    double s_lim = 0.5 * (g(1e-3) + g(-1e-3));
    double r_lim = (g(1e-3) - g(-1e-3)) / 2e-3;
    CHECK(rel(s_lim, t4.s4[1]) < 1e-5);
    CHECK(rel(r_lim, t4.r4[1]) < 1e-5);

    CHECK_THROWS_AS(residues(5, 201), GuardExceeded);
    CHECK_THROWS_AS(residues(3, 5), DomainError);
}

TEST_CASE("convolution of W3 into W4") {
    CHECK(convolution_w4_from_w3(0).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(convolution_w4_from_w3(2).value - 4.0) < 1e-12);
    CHECK(std::abs(convolution_w4_from_w3(-1).value - bessel_moment(4, -1).value) < 1e-8);
    CHECK(std::abs(convolution_w4_from_w3(1).value - bessel_moment(4, 1).value) < 1e-8);
    CHECK(std::abs(convolution_w4_from_w3(-3).value - bessel_moment(4, 1).value / 64.0) < 1e-8);
    CHECK(std::abs(convolution_w4_from_w3(3).value - bessel_moment(4, 3).value) < 1e-8);
    CHECK_THROWS_AS(convolution_w4_from_w3(0.5), DomainError);
    CHECK_THROWS_AS(convolution_w4_from_w3(-2), PoleError);
    CHECK_THROWS_AS(convolution_w4_from_w3(-1, 3), SlowConvergence);
}

TEST_CASE("eta-product integrals") {
    for (double t : {0.05, 0.3, 1.0, 5.0, 30.0}) {
        CHECK(mahler_eta_kernel(EtaIntegral::w5, t) > 0.0);
        CHECK(mahler_eta_kernel(EtaIntegral::w6, t) > 0.0);
    }
    CHECK(std::abs(mahler_eta_integral(EtaIntegral::w5) - wn_prime(5, 0, DerivMethod::bessel).value) < 1e-8);
    CHECK(std::abs(mahler_eta_integral(EtaIntegral::w6) - wn_prime(6, 0, DerivMethod::bessel).value) < 1e-6);
}
