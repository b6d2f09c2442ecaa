#pragma once

#include <string>
#include <vector>

#include "walkdens/densities/densities.hpp"
#include "walkdens/exact/polynomial.hpp"
#include "walkdens/moments/exact.hpp"

namespace walkdens {

// Differential operator sum_i x^{p_i} P_i(theta) with theta = x d/dx.
struct ThetaTerm {
    int x_power = 0;
    Poly theta;
};

class ThetaOperator {
public:
    ThetaOperator() = default;
    // Terms with equal x_power are merged and zero terms dropped; the result is sorted by x_power.
    explicit ThetaOperator(std::vector<ThetaTerm> terms);

    const std::vector<ThetaTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Highest theta-degree over all terms, i.e. the order of the operator.
    int order() const;
    // P(theta) attached to x^p, zero if absent.
    Poly at(int x_power) const;

    // Content-free integer coefficients, lowest x-power 0, and the top x-power term's leading
    // theta coefficient positive.
    ThetaOperator normalized() const;

    ThetaOperator operator+(const ThetaOperator& o) const;
    ThetaOperator operator*(const Rational& s) const;
    bool operator==(const ThetaOperator& o) const;
    bool operator!=(const ThetaOperator& o) const { return !(*this == o); }

private:
    std::vector<ThetaTerm> terms_;
};

// Operator in the plain derivative: sum_i c[i](x) D_x^i.
struct DxOperator {
    std::vector<Poly> c;

    int order() const { return static_cast<int>(c.size()) - 1; }
    const Poly& leading() const { return c.back(); }
    bool operator==(const DxOperator& o) const { return c == o.c; }
};

// Recurrence in f(k) = W(2k) to the operator annihilating the density, via M[x^mu f](s) = F(s + mu)
// and M[theta f](s) = -s F(s) with F(s) = W(s - 1). The term q_j becomes x^{2j} P_j(theta),
// P_j(t) = (-2)^degree q_j(-(t + 2j + 1)/2). The scale (-2)^degree clears the halves; the map is
// linear for a fixed degree. The one-argument form takes the operator's own maximal degree.
ThetaOperator mellin_translate(const RecurrenceOperator& rec, int degree);
ThetaOperator mellin_translate(const RecurrenceOperator& rec);

// Expands theta^m = sum_i S(m, i) x^i D^i with Stirling numbers of the second kind.
DxOperator theta_to_dx(const ThetaOperator& op);

// x^{n-1} prod over 1 <= m <= n, m = n mod 2, of (x^2 - m^2).
Poly expected_leading_coefficient(int n);

// Operators annihilating p4 and p5, and the Domb generating function (in the variable z).
ThetaOperator a4_operator();
ThetaOperator a5_operator();
ThetaOperator b4_operator();

// sum_k (a[k] + b[k] log x) x^(alpha + step*k) with exact coefficients.
struct ExactLogSeries {
    int alpha = 0;
    int step = 1;
    std::vector<Rational> a;
    std::vector<Rational> b;
};

// Applies op term by term, using theta^m (x^e log x) = e^m x^e log x + m e^(m-1) x^e, and returns the
// largest coefficient (plain and log parts) among the first K + 1 orders of the image. Orders are
// counted from the lowest image exponent in steps of the series step; all of them must be fully
// determined by the truncated series, else DomainError.
Rational annihilation_residual(const ThetaOperator& op, const ExactLogSeries& series, int K);

struct AnnihilationResult {
    double max_abs = 0.0;
    // Residual divided by the sum of the magnitudes of the contributions at the same order.
    double max_rel = 0.0;
};
// Floating counterpart for the numeric expansions at 0.
AnnihilationResult annihilation_residual(const ThetaOperator& op, const LogPowerSeries& series, int K);

// Domb numbers W4(2k), k < K, as the analytic series y0(z) at 0.
ExactLogSeries domb_series(int K);
// y1(z) = y0(z) log z + g(z), g in z Q[[z]], the logarithmic Frobenius solution of B4.
ExactLogSeries domb_log_series(int K);
// x y1(x^2/64), proportional to p4, minus its log(64) multiple of the analytic solution x y0(x^2/64):
// the coefficient of x^(2k+1) is (g_k + 2 c_k log x)/64^k.
ExactLogSeries p4_exact_series(int K);
// sum r_k x^(2k+1) from the residue recurrence with r_{-1} = 0 and the given r_0, r_1.
ExactLogSeries p5_exact_series(int K, const Rational& r0, const Rational& r1);

// Plain-text layout: one term per line, theta polynomials split into rational linear factors.
std::string format_theta(const ThetaOperator& op, const std::string& var = "x");
std::string format_dx(const DxOperator& op, const std::string& var = "x");
// Rational linear factors in descending root order times the remaining factor, e.g. 6 x^4 (x^2 - 10).
std::string format_factored(const Poly& p, const std::string& var);

}  // namespace walkdens
