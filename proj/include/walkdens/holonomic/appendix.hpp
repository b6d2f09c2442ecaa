#pragma once

#include <string>
#include <vector>

#include "walkdens/exact/polynomial.hpp"

namespace walkdens {

inline constexpr int gap_max_n = 60;
inline constexpr int gap_max_j = 12;
inline constexpr int fmk_max_m = 40;
inline constexpr int appendix_max_m = 20;
inline constexpr int appendix_max_n = 10;

struct IdentitySides {
    Integer lhs;
    Integer rhs;
};

// lhs: sum over 0 <= m_1 < ... < m_j < n/2 of prod (n - 2 m_i)^2.
// rhs: sum over 1 <= a_1, a_{i+1} >= a_i + 2, a_j <= n of prod a_i (n + 1 - a_i).
// Throws GuardExceeded beyond n = 60 or j = 12.
IdentitySides gap_sides(int n, int j);

// F_{M,k}(X): sum over 0 < j_1 < ... < j_k < M with gaps >= 2 of prod j_s (X - j_s).
// Zero unless 0 <= 2k <= M. Throws GuardExceeded for M > 40.
Poly fmk_poly(int M, int k);

// Phi_M(X, u) = sum_k (-1)^k F_{M,k}(X) u^{M-2k}; BiPoly variable x is X and y is u.
// Built from Phi_{M+1} = u Phi_M - M (X - M) Phi_{M-1}. Throws GuardExceeded for M > 40.
BiPoly phi_poly(int M);
// The same polynomial assembled directly from fmk_poly.
BiPoly phi_from_fmk(int M);

// prod over |lambda| < M, lambda of opposite parity to M, of (u - lambda).
Poly phi_root_product(int M);

struct IdentityCheck {
    std::string name;
    long cases = 0;
    long failures = 0;
    // First failing parameters, empty when all cases hold.
    std::string first_failure;
};

struct AppendixReport {
    std::vector<IdentityCheck> checks;
    bool all_pass() const;
};

// Exact checks for M <= M_max, n <= n_max: the F_{M,k} recursion and values at X = M, the Phi
// recursion against direct assembly, the root product at X = M, its binomial average at X = M - n,
// the product rule Phi_{M+n}(M, u) = Phi_M(M, u) Phi_n(-M, u), the double-binomial form of
// Phi_M(x + y + 1, y - x)/M!, and the coefficients of (1 - T)^x (1 + T)^y.
// Throws GuardExceeded beyond M = 20 or n = 10.
AppendixReport appendix_identities(int M_max, int n_max);

// gap_sides equality for 1 <= n <= n_max, 1 <= j <= j_max, plus agreement of the right side
// with the coefficients of the characteristic polynomial.
IdentityCheck gap_identity_check(int n_max, int j_max);

}  // namespace walkdens
