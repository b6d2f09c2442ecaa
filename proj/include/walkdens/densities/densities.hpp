#pragma once

#include <string>
#include <vector>

#include "walkdens/moments/moment_value.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens {

enum class DensityMethod { closed_form, series0, log_continuation, quadrature, convolution, asym_edge };

std::string to_string(DensityMethod m);
DensityMethod parse_density_method(const std::string& name);

struct EvalResult {
    double value = 0.0;
    double err = 0.0;
    DensityMethod method = DensityMethod::closed_form;
    std::string region;
    // Set at points where the density is singular or has a singular derivative. Not an error.
    bool singular = false;
};

// sum_k (a[k] + b[k] log x) x^(alpha + step*k). The densities at 0 are odd, so step = 2.
struct LogPowerSeries {
    double alpha = 1.0;
    int step = 2;
    std::vector<double> a;
    std::vector<double> b;
    double radius = 0.0;

    double eval(double x) const;
};

// One uniform step from each of a walk of lengths a and b; p2 is the case a = b = 1.
EvalResult p2(double x);
EvalResult p2_two_step(double x, double a, double b);

enum class P3Method { automatic, elliptic, hyper, agm, series };
EvalResult p3(double x, P3Method method = P3Method::automatic, const Precision& prec = {});

enum class P4Method { automatic, hyper, series0, asym4, quadrature };
EvalResult p4(double x, P4Method method = P4Method::automatic, const Precision& prec = {});

// Both sides of the eta-quotient parameterisation of p4 at tau = -1/2 + iy.
struct ModularSides {
    double argument = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};
// Throws DomainError when the argument of p4 is not real and in (0, 2).
ModularSides p4_modular_sides(double y, const Precision& prec = {});
double p4_modular_check(double y, const Precision& prec = {});

enum class P5Method { automatic, series0, quadrature };
EvalResult p5(double x, P5Method method = P5Method::automatic, const Precision& prec = {});

// x * int_0^inf t J0(xt) J0(t)^n dt. At the jump x = n = 3 the integral gives the mean of the one-sided
// limits. Below x = 2e-3 the ratio p_n(x)/x is extended from three cached quadrature anchors.
EvalResult pn_quadrature(int n, double x, const Precision& prec = {});
// p_n from p_{n-1} by averaging over the direction of the last step; n in 3..6.
EvalResult pn_convolution(int n, double x, const Precision& prec = {});
// Dispatches to the best available route for any n >= 1; n = 1 has no density and throws.
EvalResult density(int n, double x, const Precision& prec = {});

double rayleigh(int n, double x);

// int_0^n x^s p_n(x) dx by tanh-sinh on panels cut at the singular abscissas; n >= 2, and s > -1
// for n = 2, s > -2 otherwise. For n = 2 the edge singularity limits accuracy to about 1e-8.
MomentValue density_moment(int n, double s, const Precision& prec = {});

inline constexpr int series_max_terms = 200;
// Expansion of p_n at 0 for n in {3, 4, 5} with K coefficient pairs. Throws GuardExceeded for K > 200.
const LogPowerSeries& series_at_zero(int n, int K);

// Switch points of the automatic dispatch. Changing them moves work between representations
// without changing the function; set them before any concurrent evaluation starts.
struct DispatchSeams {
    // p3 uses its series at 0 up to here, AGM beyond.
    double p3_series_limit = 0.8;
    // p4 uses its series at 0 up to here (must stay below 2).
    double p4_series_limit = 1.5;
    // Half-width of the quadrature window around the kink of p4 at 2.
    double p4_quad_halfwidth = 0.05;
    // p4 switches to its edge expansion past here.
    double p4_edge_start = 3.999;
    // p5 uses its series at 0 up to here (at most 1).
    double p5_series_limit = 1.0;

    // Throws InvalidParameter when a seam leaves the convergence region of its series.
    void validate() const;
};
const DispatchSeams& dispatch_seams();
void set_dispatch_seams(const DispatchSeams& seams);

P3Method parse_p3_method(const std::string& name);
P4Method parse_p4_method(const std::string& name);
P5Method parse_p5_method(const std::string& name);

}  // namespace walkdens
