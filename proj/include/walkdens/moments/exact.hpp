#pragma once

#include <vector>

#include "walkdens/exact/polynomial.hpp"

namespace walkdens {

// Default guard for the multinomial sum defining the even moments.
inline constexpr int even_moment_max_n = 10;
inline constexpr int even_moment_max_k = 30;

// W_n(2k) = sum over compositions a_1 + ... + a_n = k of multinomial(k; a)^2.
Integer even_moment_exact(int n, int k);
// W_n(0), ..., W_n(2K) without the guard, built from W_n(2k) = sum_a C(k, a)^2 W_{n-1}(2(k - a)).
std::vector<Integer> even_moment_sequence(int n, int K);

// sum_j q_j(k) f(k + j) = 0 with polynomial coefficients in k.
struct RecurrenceOperator {
    std::vector<Poly> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    int max_degree() const;
    // sum_j q_j(k) f[k + j]; f must hold at least k + order + 1 entries.
    Rational apply(const std::vector<Rational>& f, long k) const;
    Rational apply(const std::vector<Integer>& f, long k) const;
    // q_j at real k.
    double coeff_at(int j, double k) const;

    RecurrenceOperator operator+(const RecurrenceOperator& o) const;
    bool operator==(const RecurrenceOperator& o) const { return coeffs == o.coeffs; }
};

// Recurrence for f(k) = W_n(2k) from the explicit sum over gap-2 sequences, normalised to
// content-free integer coefficients with the common power of k removed and q_order(k) leading positive.
RecurrenceOperator verrill_operator(int n);
// Shared, lazily built copy of verrill_operator(n); safe to call from several threads.
const RecurrenceOperator& cached_verrill_operator(int n);

// Characteristic polynomial sum_j e_j x^{lambda - j}, e_j the alternating sum over gap-2 sequences.
Poly char_poly(int n);
// prod over 1 <= m <= n, m = n mod 2, of (x - m^2).
Poly char_poly_product(int n);
// Leading k-coefficients of the operator read as a polynomial in the shift, q_order first.
Poly leading_char_poly(const RecurrenceOperator& op);

}  // namespace walkdens
