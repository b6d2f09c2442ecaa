#pragma once

#include "walkdens/moments/exact.hpp"
#include "walkdens/moments/moment_value.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens {

// True at the poles s = -2, -4, ... of W_n for n >= 3 (odd negative integers for n = 2).
bool is_moment_pole(int n, double s);

// W_3(s) as a single 3F2 at 1/4 for s > -2; s <= -2 continues through the functional equation.
MomentValue w3(double s, const Precision& prec = {});

// Two-term hypergeometric forms. Odd integers are rejected (tan(pi s / 2) pole). For W_4 the
// 4F3 at unit argument converges only for s > -1.
MomentValue w3_two_term(double s, const Precision& prec = {});
MomentValue w4_two_term(double s, const Precision& prec = {});

// W_3(-2k - 1) as a single 3F2 at 1/4.
MomentValue w3_neg_odd(int k, const Precision& prec = {});

// Moves s right by steps of 2 into s > -2, evaluates a direct form there and runs the moment
// recurrence back down. Supports 3 <= n <= 8.
MomentValue continue_by_functional_eq(int n, double s, const Precision& prec = {});

// Modified-Bessel integrals t^{s+1} K_0^2 I_0 (n = 3) and t^{s+1} K_0^3 I_0 (n = 4), s > -2.
MomentValue bessel_moment(int n, double s, const Precision& prec = {});

// W_n(s) and its first two s-derivatives from
//   W_n(s) = 2^{s+1-k} Gamma(1+s/2)/Gamma(k-s/2) int x^{2k-s-1} (-(1/x) d/dx)^k J_0^n(x) dx
// with k picked so the integral converges.
struct BesselFormValue {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double err = 0.0;
    int k = 0;
};
BesselFormValue bessel_form_moment(int n, double s, int derivatives = 0, const Precision& prec = {});

// int_0^inf x^{power} (log x)^q J_0^{n-1}(x) J_1(x) dx and int_0^inf x^{power} (log x)^q J_0^n(x) dx.
double bessel_log_integral(int n, double power, int q, bool with_j1, const Precision& prec = {});

// Best available route for W_n(s).
MomentValue moment(int n, double s, const Precision& prec = {});

}  // namespace walkdens
