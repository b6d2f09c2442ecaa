#include "walkdens/moments/analytic.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/bessel_integral.hpp"
#include "walkdens/numerics/hypergeometric.hpp"
#include "walkdens/numerics/quadrature.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;

bool is_integer(double s) { return std::isfinite(s) && s == std::floor(s); }
bool is_odd_integer(double s) { return is_integer(s) && std::fmod(std::abs(s), 2.0) == 1.0; }

// binom(s, s/2) and binom(s, (s-1)/2) for real s through the Gamma function.
double binom_half(double s) { return gamma_fn(s + 1.0) / std::pow(gamma_fn(s / 2.0 + 1.0), 2); }
double binom_half_odd(double s) { return gamma_fn(s + 1.0) / (gamma_fn((s + 1.0) / 2.0) * gamma_fn((s + 3.0) / 2.0)); }

// Coefficients of J_0(x)^n = sum_m c_m x^{2m}.
std::vector<double> j0_power_series(int n, int terms) {
    std::vector<double> j0(terms);
    double t = 1.0;
    for (int m = 0; m < terms; ++m) {
        j0[m] = t;
        t *= -0.25 / ((m + 1.0) * (m + 1.0));
    }
    std::vector<double> out(terms, 0.0);
    out[0] = 1.0;
    for (int p = 0; p < n; ++p) {
        std::vector<double> next(terms, 0.0);
        for (int i = 0; i < terms; ++i)
            for (int j = 0; i + j < terms; ++j) next[i + j] += out[i] * j0[j];
        out = std::move(next);
    }
    return out;
}

// (-(1/x) d/dx)^k J_0^n as sum coef x^p J_0^a J_1^b, keyed by (p, a, b).
std::map<std::tuple<int, int, int>, double> bessel_derivative_terms(int n, int k) {
    std::map<std::tuple<int, int, int>, double> terms{{{0, n, 0}, 1.0}};
    for (int step = 0; step < k; ++step) {
        std::map<std::tuple<int, int, int>, double> next;
        for (const auto& [key, c] : terms) {
            auto [p, a, b] = key;
            if (p - b != 0) next[{p - 2, a, b}] += -(p - b) * c;
            if (a > 0) next[{p - 1, a - 1, b + 1}] += a * c;
            if (b > 0) next[{p - 1, a + 1, b - 1}] += -b * c;
        }
        terms.clear();
        for (const auto& [key, c] : next)
            if (c != 0.0) terms.emplace(key, c);
    }
    return terms;
}

// Integrals int x^{power} (log x)^q g_k(x) dx, q = 0..qmax.
std::vector<BesselIntegral> integrate_bessel_form(int n, int k, double power, int qmax, const Precision& prec) {
    auto terms = bessel_derivative_terms(n, k);
    auto series = j0_power_series(n, 40);
    // Series of g_k: sum_{m >= k} c_m (-1)^k 2m (2m - 2) ... (2m - 2k + 2) x^{2m - 2k}.
    std::vector<double> gser;
    for (int m = k; m < 40; ++m) {
        double f = k % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < k; ++i) f *= 2.0 * (m - i);
        gser.push_back(series[m] * f);
    }
    BesselIntegrand in;
    in.power = power;
    for (const auto& [key, c] : terms) {
        auto [p, a, b] = key;
        BesselProduct prod;
        prod.coefficient = c;
        prod.power_shift = p;
        for (int i = 0; i < a; ++i) prod.factors.push_back({0, 1.0});
        for (int i = 0; i < b; ++i) prod.factors.push_back({1, 1.0});
        in.products.push_back(prod);
    }
    in.series_radius = 1.0;
    in.series_head = [gser](double x) {
        double x2 = x * x, v = 0.0;
        for (std::size_t i = gser.size(); i-- > 0;) v = v * x2 + gser[i];
        return v;
    };
    std::vector<BesselIntegral> out;
    for (int q = 0; q <= qmax; ++q) {
        in.log_poly.assign(q + 1, 0.0);
        in.log_poly[q] = 1.0;
        out.push_back(integrate_bessel_product(in, prec));
    }
    return out;
}

int choose_bessel_k(int n, double s) {
    const double margin = 1e-9;
    auto tail_ok = [&](int k) { return n % 2 == 1 || k < s + n / 2.0 - margin; };
    // 2k - s - 1 >= 0 keeps the integrand bounded at the origin.
    int kmin = std::max(1, static_cast<int>(std::ceil((s + 1.0) / 2.0 - 1e-12)));
    for (int k = kmin; k <= kmin + 1; ++k)
        if (s < 2.0 * k - margin && tail_ok(k)) return k;
    if (s < -margin && tail_ok(0)) return 0;
    throw MethodUnavailable("bessel_form_moment: no convergent Bessel form for this (n, s)");
}

double tail_bound_decay(double f_T, double rate, double s, double T) {
    double r = rate - (s + 1.0) / T;
    return r > 0.0 ? f_T / r : f_T * T;
}

}  // namespace

bool is_moment_pole(int n, double s) {
    if (!is_integer(s) || s >= 0.0) return false;
    if (n == 2) return is_odd_integer(s);
    if (n >= 3) return !is_odd_integer(s);
    return false;
}

MomentValue w3(double s, const Precision& prec) {
    if (is_moment_pole(3, s)) throw PoleError("w3: pole of W_3 at s = " + std::to_string(s));
    if (s <= -2.0) {
        auto r = continue_by_functional_eq(3, s, prec);
        return r;
    }
    double a = (s + 2.0) / 2.0;
    Estimate f = hyp_pfq_estimate({{a, a, a}, {1.0, (s + 3.0) / 2.0}}, 0.25, prec);
    double lg = std::log(3.0) * (s + 1.5) - std::log(2.0 * pi) + 2.0 * log_gamma(1.0 + s / 2.0) - log_gamma(s + 2.0);
    double pref = std::exp(lg);
    MomentValue r;
    r.value = pref * f.value;
    r.err = std::abs(pref) * f.error + 4e-16 * std::abs(r.value) * (1.0 + std::abs(lg));
    r.method = MomentMethod::hyp_single;
    return r;
}

MomentValue w3_two_term(double s, const Precision& prec) {
    if (is_odd_integer(s)) throw DomainError("w3_two_term: odd integer s is excluded");
    if (is_moment_pole(3, s)) throw PoleError("w3_two_term: pole of W_3");
    MomentValue r;
    r.method = MomentMethod::hyp_two_term;
    double term1 = 0.0, err1 = 0.0;
    double t = std::tan(pi * s / 2.0);
    if (t != 0.0 && !is_integer(s)) {
        double b = binom_half_odd(s);
        Estimate f1 = hyp_pfq_estimate({{0.5, 0.5, 0.5}, {(s + 3.0) / 2.0, (s + 3.0) / 2.0}}, 0.25, prec);
        double pref = std::pow(2.0, -(2.0 * s + 1.0)) * t * b * b;
        term1 = pref * f1.value;
        err1 = std::abs(pref) * f1.error;
    }
    double a = -s / 2.0;
    Estimate f2 = hyp_pfq_estimate({{a, a, a}, {1.0, (1.0 - s) / 2.0}}, 0.25, prec);
    double b2 = binom_half(s);
    r.value = term1 + b2 * f2.value;
    r.err = err1 + std::abs(b2) * f2.error + 1e-15 * (std::abs(term1) + std::abs(b2 * f2.value));
    return r;
}

MomentValue w4_two_term(double s, const Precision& prec) {
    if (is_odd_integer(s)) throw DomainError("w4_two_term: odd integer s is excluded");
    if (is_moment_pole(4, s)) throw PoleError("w4_two_term: pole of W_4");
    if (s <= -1.0) throw DomainError("w4_two_term: the 4F3 at unit argument diverges for s <= -1");
    MomentValue r;
    r.method = MomentMethod::hyp_two_term;
    double term1 = 0.0, err1 = 0.0;
    double t = std::tan(pi * s / 2.0);
    if (t != 0.0 && !is_integer(s)) {
        double b = binom_half_odd(s);
        double c = (s + 3.0) / 2.0;
        Estimate f1 = hyp_pfq_estimate({{0.5, 0.5, 0.5, s / 2.0 + 1.0}, {c, c, c}}, 1.0, prec);
        double pref = std::pow(2.0, -2.0 * s) * t * b * b * b;
        term1 = pref * f1.value;
        err1 = std::abs(pref) * f1.error;
    }
    double a = -s / 2.0;
    Estimate f2 = hyp_pfq_estimate({{0.5, a, a, a}, {1.0, 1.0, (1.0 - s) / 2.0}}, 1.0, prec);
    double b2 = binom_half(s);
    r.value = term1 + b2 * f2.value;
    r.err = err1 + std::abs(b2) * f2.error + 1e-15 * (std::abs(term1) + std::abs(b2 * f2.value));
    return r;
}

MomentValue w3_neg_odd(int k, const Precision& prec) {
    if (k < 0) throw DomainError("w3_neg_odd: k must be >= 0");
    double kk = k + 1.0;
    Estimate f = hyp_pfq_estimate({{0.5, 0.5, 0.5}, {kk, kk}}, 0.25, prec);
    double lp = 2.0 * (log_gamma(2.0 * k + 1.0) - 2.0 * log_gamma(k + 1.0)) - (4.0 * k + 1.0) * std::log(2.0) -
                2.0 * k * std::log(3.0) + 0.5 * std::log(3.0);
    double pref = std::exp(lp);
    MomentValue r;
    r.value = pref * f.value;
    r.err = pref * f.error + 2e-16 * (1.0 + std::abs(lp)) * r.value;
    r.method = MomentMethod::hyp_single;
    return r;
}

MomentValue continue_by_functional_eq(int n, double s, const Precision& prec) {
    if (n < 3 || n > 8) throw DomainError("continue_by_functional_eq: supports 3 <= n <= 8");
    if (!std::isfinite(s)) throw DomainError("continue_by_functional_eq: s must be finite");
    if (is_moment_pole(n, s)) throw PoleError("continue_by_functional_eq: pole of W_n");
    const auto& op = cached_verrill_operator(n);
    const int lam = op.order();
    int m = 1;
    // Start no lower than -1, away from the pole at -2 where the direct forms lose accuracy.
    while (s + 2.0 * m < -1.0) ++m;
    double base = s + 2.0 * m;
    auto direct = [&](double t) -> MomentValue {
        if (n == 3) return w3(t, prec);
        if (n == 4) return bessel_moment(4, t, prec);
        auto b = bessel_form_moment(n, t, 0, prec);
        return {b.value, b.err, MomentMethod::bessel_integral};
    };
    // window[i] = W(t + 2i) for the current lowest point t.
    std::vector<double> val(lam), err(lam);
    for (int i = 0; i < lam; ++i) {
        auto v = direct(base + 2.0 * i);
        val[i] = v.value;
        err[i] = v.err;
    }
    double t = base;
    for (int step = 0; step < m; ++step) {
        t -= 2.0;
        double k = t / 2.0;
        double q0 = op.coeff_at(0, k);
        if (q0 == 0.0) throw PoleError("continue_by_functional_eq: recurrence degenerates at a pole");
        double acc = 0.0, e = 0.0, mag = 0.0;
        for (int j = 1; j <= lam; ++j) {
            double c = op.coeff_at(j, k) / q0;
            acc -= c * val[j - 1];
            e += std::abs(c) * err[j - 1];
            mag += std::abs(c * val[j - 1]);
        }
        for (int i = lam - 1; i > 0; --i) {
            val[i] = val[i - 1];
            err[i] = err[i - 1];
        }
        val[0] = acc;
        err[0] = e + 4e-16 * mag;
    }
    return {val[0], err[0], MomentMethod::functional_eq};
}

namespace {

// int_0^a t^{beta-1} (c - log t)^m dt with c = log 2 - gamma, which is a^beta m! sum_{i<=m} x^i/i! / beta^{m+1}
// for x = beta (c - log a).
double log_power_head(double beta, int m, double a) {
    const double x = beta * (std::log(2.0) - std::numbers::egamma - std::log(a));
    double term = 1.0, sum = 1.0, mfact = 1.0;
    for (int i = 1; i <= m; ++i) {
        term *= x / i;
        sum += term;
        mfact *= i;
    }
    return std::pow(a, beta) * mfact * sum / std::pow(beta, m + 1);
}

// int_0^a t^{beta-1} K_0(t)^k I_0(t) dt from K_0 = L (1 + t^2/4) + t^2/4 + O(t^4 L) and I_0 = 1 + t^2/4 + O(t^4),
// L = log 2 - gamma - log t. The omitted terms are below 1e-13 relative for a = 1e-3.
double bessel_head_closed_form(int k, double beta, double a) {
    return log_power_head(beta, k, a) +
           0.25 * ((k + 1) * log_power_head(beta + 2.0, k, a) + k * log_power_head(beta + 2.0, k - 1, a));
}

}  // namespace

MomentValue bessel_moment(int n, double s, const Precision& prec) {
    prec.validate();
    if (n != 3 && n != 4) throw DomainError("bessel_moment: n must be 3 or 4");
    if (!(s > -2.0)) throw DomainError("bessel_moment: requires s > -2");
    const int kpow = n == 3 ? 2 : 3;
    const double rate = n == 3 ? 1.0 : 2.0;
    auto f = [&](double t) {
        double k0 = bessel_k0_scaled(t);
        double i0 = bessel_i0_scaled(t);
        return std::pow(t, s + 1.0) * std::pow(k0, kpow) * i0 * std::exp(-rate * t);
    };
    double rel = std::min(prec.target_rel_error, 1e-13) * 0.1;
    // Near s = -2 the mass of t^{s+1} log^k t spreads over every scale down to underflow, so
    // [0, a] is integrated in closed form and only [a, 1] numerically.
    const double a = 1e-3;
    auto head = integrate_adaptive<double>(f, {a, 1e-2, 0.1, 1.0}, 1e-300, rel, 4000);
    const double closed = bessel_head_closed_form(kpow, s + 2.0, a);
    head.value += closed;
    head.error += 1e-13 * std::abs(closed);
    double T = std::max(60.0, 4.0 * (s + 2.0) + 60.0) / rate;
    std::vector<double> bps;
    for (double x = 1.0; x < T; x += 2.0) bps.push_back(x);
    bps.push_back(T);
    auto body = integrate_adaptive<double>(f, bps, 1e-300, rel, 4000);
    double total = head.value + body.value;
    double tail = tail_bound_decay(f(T), rate, s, T);
    double lpre;
    if (n == 3)
        lpre = (s + 1.5) * std::log(3.0) - std::log(pi) - s * std::log(2.0) - 2.0 * log_gamma(s / 2.0 + 1.0);
    else
        lpre = (s + 2.0) * std::log(4.0) - 2.0 * std::log(pi) - 2.0 * log_gamma(s / 2.0 + 1.0);
    double pre = std::exp(lpre);
    MomentValue r;
    r.value = pre * (total + tail);
    r.err = pre * (head.error + body.error + tail) + 4e-16 * (1.0 + std::abs(lpre)) * std::abs(r.value);
    r.method = MomentMethod::bessel_integral;
    return r;
}

BesselFormValue bessel_form_moment(int n, double s, int derivatives, const Precision& prec) {
    if (n < 2) throw DomainError("bessel_form_moment: n must be >= 2");
    if (derivatives < 0 || derivatives > 2) throw DomainError("bessel_form_moment: derivatives must be 0, 1 or 2");
    if (!(s > -2.0)) throw DomainError("bessel_form_moment: requires s > -2");
    int k = choose_bessel_k(n, s);
    auto I = integrate_bessel_form(n, k, 2.0 * k - s - 1.0, derivatives, prec);
    for (const auto& v : I)
        if (v.divergent) throw MethodUnavailable("bessel_form_moment: divergent integral");
    double lp = (s + 1.0 - k) * std::log(2.0) + log_gamma(1.0 + s / 2.0) - log_gamma(k - s / 2.0);
    double sign = 1.0;
    if (gamma_fn(k - s / 2.0) < 0.0) sign = -sign;
    if (gamma_fn(1.0 + s / 2.0) < 0.0) sign = -sign;
    double P = sign * std::exp(lp);
    BesselFormValue r;
    r.k = k;
    r.value = P * I[0].value;
    r.err = std::abs(P) * I[0].error + 4e-16 * std::abs(r.value) * (1.0 + std::abs(lp));
    if (derivatives >= 1) {
        // d/ds log P and its derivative.
        double L1 = std::log(2.0) + 0.5 * digamma(1.0 + s / 2.0) + 0.5 * digamma(k - s / 2.0);
        r.d1 = P * (L1 * I[0].value - I[1].value);
        r.err = std::max(r.err, std::abs(P) * (std::abs(L1) * I[0].error + I[1].error));
        if (derivatives == 2) {
            double L2 = 0.25 * trigamma(1.0 + s / 2.0) - 0.25 * trigamma(k - s / 2.0);
            r.d2 = P * ((L2 + L1 * L1) * I[0].value - 2.0 * L1 * I[1].value + I[2].value);
            r.err = std::max(r.err, std::abs(P) * (std::abs(L2 + L1 * L1) * I[0].error + 2.0 * std::abs(L1) * I[1].error +
                                                   I[2].error));
        }
    }
    return r;
}

double bessel_log_integral(int n, double power, int q, bool with_j1, const Precision& prec) {
    BesselIntegrand in;
    in.power = power;
    in.log_poly.assign(q + 1, 0.0);
    in.log_poly[q] = 1.0;
    BesselProduct p;
    for (int i = 0; i < (with_j1 ? n - 1 : n); ++i) p.factors.push_back({0, 1.0});
    if (with_j1) p.factors.push_back({1, 1.0});
    in.products.push_back(p);
    auto r = integrate_bessel_product(in, prec);
    if (r.divergent) throw MethodUnavailable("bessel_log_integral: divergent integral");
    return r.value;
}

MomentValue moment(int n, double s, const Precision& prec) {
    if (n < 1) throw DomainError("moment: n must be >= 1");
    if (!std::isfinite(s)) throw DomainError("moment: s must be finite");
    if (is_moment_pole(n, s)) throw PoleError("moment: pole of W_n at s = " + std::to_string(s));
    if (n == 1) return {1.0, 0.0, MomentMethod::closed_form};
    if (n == 2) return {binom_half(s), 1e-15 * std::abs(binom_half(s)), MomentMethod::closed_form};
    if (is_integer(s) && s >= 0.0 && std::fmod(s, 2.0) == 0.0 && s <= 400.0) {
        int k = static_cast<int>(s / 2.0);
        auto seq = even_moment_sequence(n, k);
        return {seq[k].get_d(), 0.0, MomentMethod::exact_combinatorial};
    }
    if (s <= -2.0) return continue_by_functional_eq(n, s, prec);
    if (n == 3) return w3(s, prec);
    if (n == 4) {
        if (s > -1.0 && !is_odd_integer(s)) return w4_two_term(s, prec);
        return bessel_moment(4, s, prec);
    }
    auto b = bessel_form_moment(n, s, 0, prec);
    return {b.value, b.err, MomentMethod::bessel_integral};
}

}  // namespace walkdens
