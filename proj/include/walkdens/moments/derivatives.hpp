#pragma once

#include <string>
#include <vector>

#include "walkdens/moments/moment_value.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens {

enum class DerivMethod {
    closed_form,
    // log n - sum_m (1/2m) E[(1 - |X|^2/n^2)^m], inner sums exact.
    series_log,
    // (log n - gamma)/2 - sum_{m>=2} (1/2m) E[L_m(|X|^2/n)], L_m the Laguerre polynomial.
    series_laguerre,
    bessel,
};

std::string to_string(DerivMethod m);
DerivMethod parse_deriv_method(const std::string& name);

// W_n'(at) for n in 3..6 and at in {0, 2, 4}.
//   closed_form: n in {3, 4}; at = 4 comes from the differentiated functional equation.
//   series_*: at = 0 only.
//   bessel: differentiates the Bessel-derivative integral under the integral sign.
// Throws MethodUnavailable for other combinations.
MomentValue wn_prime(int n, double at, DerivMethod method, const Precision& prec = {});

// W_n''(at) for n in {3, 4}, at in {0, 2}. W_3''(0) from its harmonic-number series, W_4''(0) in
// closed form, values at 2 from the Bessel form.
MomentValue wn_doubleprime(int n, double at, const Precision& prec = {});

enum class ResidueQuantity { w3_res2, w5_res2, w5_res4, w4_coeff2, w4_res2 };
std::string to_string(ResidueQuantity q);

// Pole data of W_n expressed through derivatives at 0, 2, 4.
double residue_from_derivatives(ResidueQuantity which, const Precision& prec = {});

// Exact partial sums of the two series for W_n'(0) with the acceleration diagnostics.
struct SeriesDerivative {
    double value = 0.0;
    double err = 0.0;
    int terms = 0;
    std::vector<double> term_values;
};
SeriesDerivative wn_prime_series(int n, DerivMethod method, int terms = 400);

// sum_{j=0}^{J} binom(s/2, j)^2 W_3(s - 2j) for integer s; equals W_4(s).
// Throws SlowConvergence when the tail estimate exceeds the requested tolerance.
MomentValue convolution_w4_from_w3(double s, int J = 40, const Precision& prec = {});

enum class EtaIntegral { w5, w6 };
// Eta-product integrals conjectured to equal W_5'(0) (weight t^3) and W_6'(0) (weight t^4).
double mahler_eta_integral(EtaIntegral which, const Precision& prec = {});
// The integrand without the constant prefactor, for positivity checks.
double mahler_eta_kernel(EtaIntegral which, double t);

}  // namespace walkdens
