#include "walkdens/moments/derivatives.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "walkdens/errors.hpp"
#include "walkdens/exact/polynomial.hpp"
#include "walkdens/moments/analytic.hpp"
#include "walkdens/moments/exact.hpp"
#include "walkdens/numerics/quadrature.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;

constexpr std::array<std::pair<DerivMethod, const char*>, 4> deriv_names{{
    {DerivMethod::closed_form, "closed_form"},
    {DerivMethod::series_log, "series_log"},
    {DerivMethod::series_laguerre, "series_laguerre"},
    {DerivMethod::bessel, "bessel"},
}};

bool is_even_point(double at) { return at == 0.0 || at == 2.0 || at == 4.0; }

// Limit of the partial sums S[lo..hi] by least squares against 1, M^-j (log M)^l for j <= p, l <= logs.
double tail_fit(const std::vector<double>& S, int lo, int hi, int p, int logs) {
    const int cols = 1 + p * (logs + 1);
    Eigen::MatrixXd A(hi - lo + 1, cols);
    Eigen::VectorXd b(hi - lo + 1);
    for (int M = lo; M <= hi; ++M) {
        int c = 0;
        A(M - lo, c++) = 1.0;
        for (int j = 1; j <= p; ++j)
            for (int l = 0; l <= logs; ++l) A(M - lo, c++) = std::pow(M, -j) * std::pow(std::log(M), l);
        b(M - lo) = S[M];
    }
    Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
    return x(0);
}

// W_n'(4) from the functional equation differentiated at s = 0, given W_n'(0) and W_n'(2).
double prime_at_four(int n, double d0, double d2) {
    const auto& op = cached_verrill_operator(n);
    if (op.order() != 2) throw MethodUnavailable("wn_prime: closed form at 4 needs a second-order recurrence");
    auto w = even_moment_sequence(n, 2);
    // q_j(s/2) W(s + 2j) summed over j vanishes identically; differentiate in s at s = 0.
    double acc = 0.0;
    for (int j = 0; j <= 2; ++j) acc += 0.5 * op.coeffs[j].derivative().eval(Rational(0)).get_d() * w[j].get_d();
    acc += op.coeff_at(0, 0.0) * d0 + op.coeff_at(1, 0.0) * d2;
    return -acc / op.coeff_at(2, 0.0);
}

MomentValue closed_prime(int n, double at) {
    const double cl = clausen(pi / 3.0);
    double d0, d2;
    if (n == 3) {
        d0 = cl / pi;
        d2 = 2.0 + 3.0 * cl / pi - 3.0 * std::sqrt(3.0) / (2.0 * pi);
    } else if (n == 4) {
        d0 = 7.0 * zeta3() / (2.0 * pi * pi);
        d2 = 3.0 + (14.0 * zeta3() - 12.0) / (pi * pi);
    } else {
        throw MethodUnavailable("wn_prime: closed forms exist only for n = 3, 4");
    }
    double v = at == 0.0 ? d0 : at == 2.0 ? d2 : prime_at_four(n, d0, d2);
    return {v, 4e-16 * (1.0 + std::abs(v)) * (at == 4.0 ? 20.0 : 1.0), MomentMethod::closed_form};
}

}  // namespace

std::string to_string(DerivMethod m) {
    for (const auto& [k, v] : deriv_names)
        if (k == m) return v;
    return "unknown";
}

DerivMethod parse_deriv_method(const std::string& name) {
    for (const auto& [k, v] : deriv_names)
        if (name == v) return k;
    throw InvalidParameter("unknown derivative method: " + name);
}

std::string to_string(ResidueQuantity q) {
    switch (q) {
        case ResidueQuantity::w3_res2: return "w3_res2";
        case ResidueQuantity::w5_res2: return "w5_res2";
        case ResidueQuantity::w5_res4: return "w5_res4";
        case ResidueQuantity::w4_coeff2: return "w4_coeff2";
        case ResidueQuantity::w4_res2: return "w4_res2";
    }
    return "unknown";
}

SeriesDerivative wn_prime_series(int n, DerivMethod method, int terms) {
    if (n < 2) throw DomainError("wn_prime_series: n must be >= 2");
    if (terms < 40) throw InvalidParameter("wn_prime_series: need at least 40 terms");
    if (method != DerivMethod::series_log && method != DerivMethod::series_laguerre)
        throw InvalidParameter("wn_prime_series: method must be a series");
    auto W = even_moment_sequence(n, terms);
    SeriesDerivative out;
    std::vector<double> a(terms + 1, 0.0), S(terms + 1, 0.0);
    const int first_m = method == DerivMethod::series_log ? 1 : 2;
    // Inner sums exactly: sum_k C(m, k) (-1)^k W(2k) / d_k with d_k = n^{2k} or k! n^k.
    std::vector<Rational> scaled(terms + 1);
    {
        Integer d = 1;
        for (int k = 0; k <= terms; ++k) {
            scaled[k] = Rational(W[k], d);
            scaled[k].canonicalize();
            if (method == DerivMethod::series_log)
                d *= Integer(n) * Integer(n);
            else
                d *= Integer(n) * Integer(k + 1);
        }
    }
    for (int m = first_m; m <= terms; ++m) {
        Rational inner = 0;
        Integer c = 1;
        for (int k = 0; k <= m; ++k) {
            if (k % 2 == 0)
                inner += c * scaled[k];
            else
                inner -= c * scaled[k];
            c = c * (m - k) / (k + 1);
        }
        a[m] = -inner.get_d() / (2.0 * m);
    }
    double head = method == DerivMethod::series_log ? std::log(double(n))
                                                    : 0.5 * std::log(double(n)) - 0.5 * euler_gamma();
    S[0] = head;
    for (int m = 1; m <= terms; ++m) S[m] = S[m - 1] + a[m];
    out.term_values = a;
    out.terms = terms;
    if (method == DerivMethod::series_log) {
        // Terms are smooth in 1/m with log m factors from the logarithmic behaviour of p_n near 0
        // for even n; a least-squares tail fit replaces plain truncation.
        const int logs = n % 2 == 0 ? n / 2 - 1 : 0;
        double f1 = tail_fit(S, terms * 3 / 8, terms, 5, logs);
        double f2 = tail_fit(S, terms / 2, terms, 4, logs);
        out.value = f1;
        out.err = 2.0 * std::abs(f1 - f2) + 1e-14;
    } else {
        // Laguerre terms oscillate with frequency ~ sqrt(m); report the plain partial sum and its spread
        // over the last three quarters of the terms.
        out.value = S[terms];
        double spread = 0.0;
        for (int M = terms / 4; M < terms; ++M) spread = std::max(spread, std::abs(S[M] - S[terms]));
        out.err = spread;
    }
    return out;
}

MomentValue wn_prime(int n, double at, DerivMethod method, const Precision& prec) {
    if (n < 3 || n > 6) throw DomainError("wn_prime: n must be in 3..6");
    if (!is_even_point(at)) throw DomainError("wn_prime: at must be 0, 2 or 4");
    switch (method) {
        case DerivMethod::closed_form:
            return closed_prime(n, at);
        case DerivMethod::series_log:
        case DerivMethod::series_laguerre: {
            if (at != 0.0) throw MethodUnavailable("wn_prime: the series give W_n'(0) only");
            auto r = wn_prime_series(n, method, 400);
            return {r.value, r.err, MomentMethod::series};
        }
        case DerivMethod::bessel: {
            auto b = bessel_form_moment(n, at, 1, prec);
            return {b.d1, b.err, MomentMethod::bessel_integral};
        }
    }
    throw MethodUnavailable("wn_prime: unknown method");
}

MomentValue wn_doubleprime(int n, double at, const Precision& prec) {
    if (n != 3 && n != 4) throw DomainError("wn_doubleprime: n must be 3 or 4");
    if (at != 0.0 && at != 2.0) throw DomainError("wn_doubleprime: at must be 0 or 2");
    if (at == 2.0) {
        auto b = bessel_form_moment(n, at, 2, prec);
        return {b.d2, b.err, MomentMethod::bessel_integral};
    }
    if (n == 4) {
        const double z2 = pi * pi / 6.0;
        double v = (24.0 * li4_half() - 18.0 * zeta4() + 21.0 * zeta3() * ln2 - 6.0 * z2 * ln2 * ln2 +
                    std::pow(ln2, 4)) /
                   (pi * pi);
        return {v, 1e-15, MomentMethod::closed_form};
    }
    // C(2m, m)/16^m decays like 4^{-m}, so the harmonic-number series converges geometrically.
    double c = 1.0, odd_sum = 0.0, sum = 0.0;
    for (int m = 0; m < 200; ++m) {
        odd_sum += 1.0 / (2.0 * m + 1.0);
        double h = 2.0 * odd_sum - 2.0 * ln2;
        double t = c * h / ((2.0 * m + 1.0) * (2.0 * m + 1.0));
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum)) break;
        c *= (2.0 * m + 1.0) * (2.0 * m + 2.0) / ((m + 1.0) * (m + 1.0) * 16.0);
    }
    double v = pi * pi / 12.0 - 2.0 / pi * sum;
    return {v, 1e-15, MomentMethod::series};
}

double residue_from_derivatives(ResidueQuantity which, const Precision& prec) {
    switch (which) {
        case ResidueQuantity::w3_res2: {
            double d0 = wn_prime(3, 0, DerivMethod::closed_form).value;
            double d2 = wn_prime(3, 2, DerivMethod::closed_form).value;
            return (8.0 + 12.0 * d0 - 4.0 * d2) / 9.0;
        }
        case ResidueQuantity::w5_res2:
        case ResidueQuantity::w5_res4: {
            double d0 = wn_prime(5, 0, DerivMethod::bessel, prec).value;
            double d2 = wn_prime(5, 2, DerivMethod::bessel, prec).value;
            double d4 = wn_prime(5, 4, DerivMethod::bessel, prec).value;
            double r2 = (16.0 + 1140.0 * d0 - 804.0 * d2 + 64.0 * d4) / 225.0;
            if (which == ResidueQuantity::w5_res2) return r2;
            return (26.0 * r2 - 16.0 - 20.0 * d0 + 4.0 * d2) / 225.0;
        }
        case ResidueQuantity::w4_coeff2: {
            double d0 = wn_prime(4, 0, DerivMethod::closed_form).value;
            double d2 = wn_prime(4, 2, DerivMethod::closed_form).value;
            return (3.0 + 4.0 * d0 - d2) / 8.0;
        }
        case ResidueQuantity::w4_res2: {
            double d0 = wn_prime(4, 0, DerivMethod::closed_form).value;
            double d2 = wn_prime(4, 2, DerivMethod::closed_form).value;
            double dd0 = wn_doubleprime(4, 0, prec).value;
            double dd2 = wn_doubleprime(4, 2, prec).value;
            return (9.0 + 18.0 * d0 - 3.0 * d2 + 4.0 * dd0 - dd2) / 16.0;
        }
    }
    throw DomainError("residue_from_derivatives: unknown quantity");
}

MomentValue convolution_w4_from_w3(double s, int J, const Precision& prec) {
    if (s != std::floor(s)) throw DomainError("convolution_w4_from_w3: s must be an integer");
    if (J < 1) throw InvalidParameter("convolution_w4_from_w3: J must be >= 1");
    const bool even = std::fmod(std::abs(s), 2.0) == 0.0;
    if (even && s < 0.0) throw PoleError("convolution_w4_from_w3: W_4 has a pole at negative even s");
    const double h = s / 2.0;
    double sum = 0.0, err = 0.0, binom = 1.0, last = 0.0, prev = 0.0;
    int used = 0;
    for (int j = 0; j <= J; ++j) {
        if (j > 0) binom *= (h - (j - 1)) / j;
        if (binom == 0.0) break;
        double t = s - 2.0 * j;
        MomentValue w = t > -2.0 ? w3(t, prec) : w3_neg_odd(static_cast<int>((-t - 1.0) / 2.0), prec);
        double term = binom * binom * w.value;
        sum += term;
        err += binom * binom * w.err;
        prev = last;
        last = term;
        used = j;
    }
    double tail = 0.0;
    if (used == J && !(even && s >= 0.0) && prev != 0.0) {
        double r = std::abs(last / prev);
        tail = r < 1.0 ? std::abs(last) * r / (1.0 - r) : std::abs(last) * J;
    }
    if (tail > std::max(prec.target_rel_error, 1e-8) * std::abs(sum))
        throw SlowConvergence("convolution_w4_from_w3: tail estimate exceeds tolerance, raise J");
    return {sum, err + tail + 1e-16 * std::abs(sum) * used, MomentMethod::convolution};
}

double mahler_eta_kernel(EtaIntegral which, double t) {
    if (!(t > 0.0)) return 0.0;
    if (which == EtaIntegral::w5) {
        return std::pow(eta_nome(3.0 * t) * eta_nome(5.0 * t), 3) + std::pow(eta_nome(t) * eta_nome(15.0 * t), 3);
    }
    return std::pow(eta_nome(t) * eta_nome(2.0 * t) * eta_nome(3.0 * t) * eta_nome(6.0 * t), 2);
}

double mahler_eta_integral(EtaIntegral which, const Precision& prec) {
    const int weight = which == EtaIntegral::w5 ? 3 : 4;
    auto f = [&](double t) { return mahler_eta_kernel(which, t) * std::pow(t, weight); };
    // The kernel is O(exp(-t)) at infinity and vanishes faster than any power at 0.
    std::vector<double> bps{0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 100.0};
    double rel = std::max(prec.target_rel_error, 1e-15);
    auto r = integrate_adaptive<double>(f, bps, 1e-300, rel, 4000);
    if (r.error > 1e3 * rel * std::abs(r.value)) throw NonConvergence("mahler_eta_integral: quadrature did not converge");
    double pre = which == EtaIntegral::w5 ? std::pow(15.0 / (4.0 * pi * pi), 2.5) : std::pow(3.0 / (pi * pi), 3);
    return pre * r.value;
}

}  // namespace walkdens
