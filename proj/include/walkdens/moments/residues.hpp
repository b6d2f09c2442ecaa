#pragma once

#include <vector>

#include "walkdens/numerics/precision.hpp"

namespace walkdens {

inline constexpr int residue_max_k = 200;

// Pole data at s = -2k - 2, k = 0..length-1. For n = 4, W_4(s) ~ s4[k]/(s+2k+2)^2 + r4[k]/(s+2k+2);
// for n = 5, r5[k] is the residue. Only the lists of the requested n are filled.
struct ResidueTable {
    int n = 0;
    int length = 0;
    std::vector<double> s4;
    std::vector<double> r4;
    std::vector<double> r5;
    // r5 is seeded with a second value that is conjectural (numerically confirmed, not proven).
    bool r5_seed_conjectural = false;
};

// Throws GuardExceeded for K > residue_max_k.
ResidueTable residues(int n, int K, const Precision& prec = {});

// Residue of W_5 at -2 from the Gamma quotient, and the equivalent square-root form of it.
double r50_gamma_quotient();
double r50_chowla_selberg();
// Conjectured residue of W_5 at -4: (13/225) r50 - 2/(5 pi^4 r50).
double r51_conjectural();
// Residue of W_5 at -4 without the conjecture: solves the residue recurrence with r50 fixed and
// r_{N+1} = 0, which keeps only the solution decaying like 9^{-k}. Returns r_0..r_N.
std::vector<double> r5_boundary_solution(int N = 60);

}  // namespace walkdens
