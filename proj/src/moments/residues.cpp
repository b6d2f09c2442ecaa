#include "walkdens/moments/residues.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <mpfr.h>

#include "walkdens/errors.hpp"
#include "walkdens/exact/polynomial.hpp"
#include "walkdens/moments/exact.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;

class Mp {
public:
    explicit Mp(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~Mp() { mpfr_clear(v_); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double d() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

// Gamma(1/15) Gamma(2/15) Gamma(4/15) Gamma(8/15) / pi^4 into out.
void gamma_block(Mp& out, mpfr_prec_t bits) {
    Mp g(bits), x(bits), p(bits);
    mpfr_set_ui(out.get(), 1, MPFR_RNDN);
    for (unsigned a : {1u, 2u, 4u, 8u}) {
        mpfr_set_ui(x.get(), a, MPFR_RNDN);
        mpfr_div_ui(x.get(), x.get(), 15, MPFR_RNDN);
        mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
        mpfr_mul(out.get(), out.get(), g.get(), MPFR_RNDN);
    }
    mpfr_const_pi(p.get(), MPFR_RNDN);
    mpfr_pow_ui(p.get(), p.get(), 4, MPFR_RNDN);
    mpfr_div(out.get(), out.get(), p.get(), MPFR_RNDN);
}

// r50 = (sqrt 5/40) G and r51 = (13/225) r50 - 2/(5 pi^4 r50).
void seeds(Mp& r0, Mp& r1, mpfr_prec_t bits) {
    Mp t(bits), p(bits);
    gamma_block(r0, bits);
    mpfr_sqrt_ui(t.get(), 5, MPFR_RNDN);
    mpfr_mul(r0.get(), r0.get(), t.get(), MPFR_RNDN);
    mpfr_div_ui(r0.get(), r0.get(), 40, MPFR_RNDN);
    mpfr_const_pi(p.get(), MPFR_RNDN);
    mpfr_pow_ui(p.get(), p.get(), 4, MPFR_RNDN);
    mpfr_mul(p.get(), p.get(), r0.get(), MPFR_RNDN);
    mpfr_mul_ui(p.get(), p.get(), 5, MPFR_RNDN);
    mpfr_ui_div(p.get(), 2, p.get(), MPFR_RNDN);
    mpfr_mul_ui(r1.get(), r0.get(), 13, MPFR_RNDN);
    mpfr_div_ui(r1.get(), r1.get(), 225, MPFR_RNDN);
    mpfr_sub(r1.get(), r1.get(), p.get(), MPFR_RNDN);
}

// Coefficients of (15(2k+2)(2k+4))^2 r_{k+2} = A r_{k+1} - B r_k + C r_{k-1}.
struct Res5Coeffs {
    double lead, A, B, C;
};
Res5Coeffs res5_coeffs(long k) {
    double e = 2.0 * k + 2.0, o = 2.0 * k + 1.0, z = 2.0 * k;
    double l = 15.0 * (2.0 * k + 2.0) * (2.0 * k + 4.0);
    return {l * l, 259.0 * std::pow(e, 4) + 104.0 * e * e, 35.0 * std::pow(o, 4) + 42.0 * o * o + 3.0, std::pow(z, 4)};
}

std::vector<double> r5_forward(int K) {
    // The recurrence also admits a non-decaying solution, so seed errors grow like 9^k.
    const mpfr_prec_t bits = 128 + static_cast<mpfr_prec_t>(std::ceil(K * std::log2(9.0)));
    Mp rm1(bits), r0(bits), r1(bits), next(bits), t(bits);
    mpfr_set_ui(rm1.get(), 0, MPFR_RNDN);
    seeds(r0, r1, bits);
    std::vector<double> out{r0.d()};
    if (K > 1) out.push_back(r1.d());
    for (long k = 0; static_cast<int>(out.size()) < K; ++k) {
        // Integer coefficients stay below 2^53 for k <= 200.
        long e = 2 * k + 2, o = 2 * k + 1, z = 2 * k;
        long lead = 15 * (2 * k + 2) * (2 * k + 4);
        mpfr_mul_si(next.get(), r1.get(), 259 * e * e * e * e + 104 * e * e, MPFR_RNDN);
        mpfr_mul_si(t.get(), r0.get(), 35 * o * o * o * o + 42 * o * o + 3, MPFR_RNDN);
        mpfr_sub(next.get(), next.get(), t.get(), MPFR_RNDN);
        mpfr_mul_si(t.get(), rm1.get(), z * z * z * z, MPFR_RNDN);
        mpfr_add(next.get(), next.get(), t.get(), MPFR_RNDN);
        mpfr_div_si(next.get(), next.get(), lead, MPFR_RNDN);
        mpfr_div_si(next.get(), next.get(), lead, MPFR_RNDN);
        mpfr_swap(rm1.get(), r0.get());
        mpfr_swap(r0.get(), r1.get());
        mpfr_swap(r1.get(), next.get());
        out.push_back(r1.d());
    }
    return out;
}

}  // namespace

double r50_gamma_quotient() {
    Mp r0(256), r1(256);
    seeds(r0, r1, 256);
    return r0.d();
}

double r50_chowla_selberg() {
    const mpfr_prec_t bits = 256;
    Mp num(bits), den(bits), g(bits), x(bits), p(bits);
    mpfr_set_ui(num.get(), 1, MPFR_RNDN);
    mpfr_set_ui(den.get(), 5, MPFR_RNDN);
    for (unsigned a : {1u, 2u, 4u, 8u}) {
        mpfr_set_ui(x.get(), a, MPFR_RNDN);
        mpfr_div_ui(x.get(), x.get(), 15, MPFR_RNDN);
        mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
        mpfr_mul(num.get(), num.get(), g.get(), MPFR_RNDN);
    }
    for (unsigned a : {7u, 11u, 13u, 14u}) {
        mpfr_set_ui(x.get(), a, MPFR_RNDN);
        mpfr_div_ui(x.get(), x.get(), 15, MPFR_RNDN);
        mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
        mpfr_mul(den.get(), den.get(), g.get(), MPFR_RNDN);
    }
    mpfr_div(num.get(), num.get(), den.get(), MPFR_RNDN);
    mpfr_sqrt(num.get(), num.get(), MPFR_RNDN);
    mpfr_const_pi(p.get(), MPFR_RNDN);
    mpfr_sqr(p.get(), p.get(), MPFR_RNDN);
    mpfr_mul_ui(p.get(), p.get(), 2, MPFR_RNDN);
    mpfr_div(num.get(), num.get(), p.get(), MPFR_RNDN);
    return num.d();
}

double r51_conjectural() {
    Mp r0(256), r1(256);
    seeds(r0, r1, 256);
    return r1.d();
}

std::vector<double> r5_boundary_solution(int N) {
    if (N < 10 || N > 400) throw InvalidParameter("r5_boundary_solution: N must be in 10..400");
    // Unknowns rho_k = 9^k r_k for k = 1..N; equations at k = 0..N-1 with r_{N+1} = 0.
    const double r0 = r50_gamma_quotient();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
    auto col = [](long idx) { return static_cast<int>(idx - 1); };
    for (long k = 0; k < N; ++k) {
        auto c = res5_coeffs(k);
        const int row = static_cast<int>(k);
        // lead r_{k+2} - A r_{k+1} + B r_k - C r_{k-1} = 0, written in rho with 9^{-idx} factors.
        auto put = [&](long idx, double coef) {
            if (idx == 0)
                b(row) -= coef * r0 * std::pow(9.0, static_cast<double>(k));
            else if (idx >= 1 && idx <= N)
                A(row, col(idx)) += coef * std::pow(9.0, -static_cast<double>(idx - k));
        };
        put(k + 2, c.lead);
        put(k + 1, -c.A);
        put(k, c.B);
        if (k >= 1) put(k - 1, -c.C);
    }
    Eigen::VectorXd rho = A.partialPivLu().solve(b);
    std::vector<double> r(N + 1);
    r[0] = r0;
    for (int k = 1; k <= N; ++k) r[k] = rho(k - 1) * std::pow(9.0, -k);
    return r;
}

ResidueTable residues(int n, int K, const Precision& prec) {
    prec.validate();
    if (n != 4 && n != 5) throw DomainError("residues: n must be 4 or 5");
    if (K < 1) throw DomainError("residues: K must be >= 1");
    if (K > residue_max_k)
        throw GuardExceeded("residues: K = " + std::to_string(K) + " exceeds " + std::to_string(residue_max_k));
    ResidueTable t;
    t.n = n;
    t.length = K;
    if (n == 5) {
        t.r5 = r5_forward(K);
        t.r5_seed_conjectural = true;
        return t;
    }
    auto W = even_moment_sequence(4, K);
    const double c = 3.0 / (2.0 * pi * pi);
    t.s4.resize(K);
    Integer p64 = 1;
    for (int k = 0; k < K; ++k) {
        t.s4[k] = c * Rational(W[k], p64).get_d();
        p64 *= 64;
    }
    // 128k^3 r_k = 4(2k-1)(5k^2-5k+2) r_{k-1} - 2(k-1)^3 r_{k-2} + 3(64k^2 s_k - (20k^2-20k+6) s_{k-1} + (k-1)^2 s_{k-2})
    t.r4.resize(K);
    t.r4[0] = 9.0 * std::log(2.0) / (2.0 * pi * pi);
    for (int k = 1; k < K; ++k) {
        double kk = k;
        double rm2 = k >= 2 ? t.r4[k - 2] : 0.0;
        double sm2 = k >= 2 ? t.s4[k - 2] : 0.0;
        double rhs = 4.0 * (2 * kk - 1) * (5 * kk * kk - 5 * kk + 2) * t.r4[k - 1] - 2.0 * std::pow(kk - 1, 3) * rm2 +
                     3.0 * (64 * kk * kk * t.s4[k] - (20 * kk * kk - 20 * kk + 6) * t.s4[k - 1] +
                            (kk - 1) * (kk - 1) * sm2);
        t.r4[k] = rhs / (128.0 * kk * kk * kk);
    }
    return t;
}

}  // namespace walkdens
