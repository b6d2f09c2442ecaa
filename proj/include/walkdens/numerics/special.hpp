#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "walkdens/numerics/double_double.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens {

// ---- Bessel functions -------------------------------------------------------

// Below this argument J_0 and J_1 are summed as power series, above it the Hankel expansion is used.
inline constexpr double bessel_crossover = 18.0;

double bessel_j(int order, double x, const Precision& prec = {});
// J_m for integer m >= 0 (m <= 16); upward recurrence from J_0, J_1 above the crossover.
double bessel_jn(int m, double x);
// Power-series branch evaluated in double-double, exposed for branch-agreement checks.
DoubleDouble bessel_j_series(int m, double x);
// Hankel asymptotic branch, valid for large x.
double bessel_j_asymptotic(int m, double x);
// Coefficients a_k(nu) of the Hankel expansion H_nu(u) = sum_k a_k(nu) (i/u)^k, k < count.
std::vector<double> hankel_coefficients(int nu, int count);

enum class ModifiedKind { I0, K0 };

double modified_bessel(ModifiedKind kind, double x, const Precision& prec = {});
// Exponentially scaled forms e^{-x} I_0(x) and e^{x} K_0(x).
double bessel_i0_scaled(double x);
double bessel_k0_scaled(double x);

// ---- Elliptic integrals and AGM --------------------------------------------

double elliptic_k(double k, const Precision& prec = {});
double elliptic_e(double k, const Precision& prec = {});
// K and E given the complementary modulus k' = sqrt(1 - k^2), accurate as k' -> 0.
double elliptic_k_comp(double kp);
double elliptic_e_comp(double kp);

template <class Real>
Real agm3_t(Real a, Real b, double tol, std::size_t max_iter = 64);
double agm3(double a, double b, const Precision& prec = {});
DoubleDouble agm3_dd(DoubleDouble a, DoubleDouble b);
// Successive |a_n - b_n| gaps of the cubic AGM iteration, for convergence-order checks.
std::vector<double> agm3_gaps(double a, double b, std::size_t iterations);

// ---- Clausen function -------------------------------------------------------

double clausen(double theta, const Precision& prec = {});

// ---- Gamma family and constants --------------------------------------------

double gamma_fn(double x);
double log_gamma(double x);
double digamma(double x);
double trigamma(double x);
double harmonic(unsigned n);
// H_{n+1/2} = 2 sum_{k=1}^{n+1} 1/(2k-1) - 2 log 2.
double harmonic_half(unsigned n);

double euler_gamma();
double zeta3();
double zeta4();
double li4_half();

// ---- Dedekind eta -----------------------------------------------------------

struct ComplexPoint {
    double re = 0.0;
    double im = 0.0;
};

struct EtaValue {
    std::complex<double> value;
    // The pentagonal series without the q^{1/24} prefactor.
    std::complex<double> q_series;
    // |product form - pentagonal series form|.
    double self_check = 0.0;
};

EtaValue dedekind_eta_checked(std::complex<double> tau, const Precision& prec = {});
ComplexPoint dedekind_eta(ComplexPoint tau, const Precision& prec = {});
std::complex<double> dedekind_eta(std::complex<double> tau, const Precision& prec = {});

// Eta evaluated at a real nome q = e^{-t}: q^{1/24} prod (1 - q^n).
double eta_nome(double t);
// Both truncations (product, pentagonal series) for the real nome, without modular transform.
double eta_nome_product(double t);
double eta_nome_series(double t);

}  // namespace walkdens
