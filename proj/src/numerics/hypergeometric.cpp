#include "walkdens/numerics/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

template <class Real>
struct Accumulator {
    Real sum{0.0};
    Real c{0.0};
    void add(const Real& v) {
        Real y = v - c;
        Real t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

template <>
struct Accumulator<DoubleDouble> {
    DoubleDouble sum{0.0};
    void add(const DoubleDouble& v) { sum += v; }
};

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

template <class Real>
Real term_ratio(const std::vector<Real>& up, const std::vector<Real>& lo, std::size_t n) {
    Real num(1.0), den(static_cast<double>(n + 1));
    Real nn(static_cast<double>(n));
    for (const auto& a : up) num *= a + nn;
    for (const auto& b : lo) den *= b + nn;
    return num / den;
}

template <class Real>
double mag(const Real& v) {
    return std::abs(to_double(v));
}

// Richardson extrapolation of partial sums S_N, N = N0 2^i, with error expansion in N^{-(e + j)}.
template <class Real>
Real richardson_at_unit(const std::vector<Real>& up, const std::vector<Real>& lo, double excess, double zsign,
                        std::size_t max_terms, double* error, std::size_t* terms) {
    double scale = 1.0;
    for (const auto& a : up) scale = std::max(scale, mag(a));
    for (const auto& b : lo) scale = std::max(scale, mag(b));
    std::size_t n0 = static_cast<std::size_t>(32.0 * std::ceil(scale));
    int levels = 9;
    while (levels > 3 && (n0 << (levels - 1)) + 1 > max_terms) --levels;
    if ((n0 << (levels - 1)) + 1 > max_terms) throw NonConvergence("hyp_pfq: max_terms too small at |z| = 1");

    // For z = -1 average consecutive partial sums, which removes the oscillating part.
    double first_exponent = zsign > 0 ? excess : excess + 1.0;
    std::vector<Real> samples;
    Accumulator<Real> acc;
    Real term(1.0);
    Real z(zsign);
    std::size_t next = n0;
    std::size_t n = 0;
    for (; samples.size() < static_cast<std::size_t>(levels); ++n) {
        acc.add(term);
        if (n + 1 == next) {
            Real s = acc.sum;
            if (zsign < 0) s = s + term_ratio(up, lo, n) * z * term * Real(0.5);
            samples.push_back(s);
            next *= 2;
        }
        term = term * term_ratio(up, lo, n) * z;
    }
    if (terms) *terms = n;
    std::vector<std::vector<Real>> table(levels);
    for (int i = 0; i < levels; ++i) {
        table[i].push_back(samples[i]);
        for (int j = 1; j <= i; ++j) {
            Real f(std::pow(2.0, first_exponent + j - 1));
            table[i].push_back((f * table[i][j - 1] - table[i - 1][j - 1]) / (f - Real(1.0)));
        }
    }
    Real best = table[levels - 1][levels - 1];
    if (error) {
        *error = mag(best - table[levels - 1][levels - 2]) + mag(best - table[levels - 2][levels - 2]);
    }
    return best;
}

template <class Real>
Real pfq_impl(const std::vector<Real>& up, const std::vector<Real>& lo, Real z, const Precision& prec, double* error,
              std::size_t* terms) {
    prec.validate();
    for (const auto& b : lo) {
        if (nonpositive_integer(to_double(b))) throw DomainError("hyp_pfq: lower parameter is a nonpositive integer");
    }
    double az = mag(z);
    bool terminating = false;
    for (const auto& a : up) terminating = terminating || nonpositive_integer(to_double(a));
    std::size_t p = up.size(), q = lo.size();
    if (!terminating && p > q + 1 && az != 0.0) throw DomainError("hyp_pfq: divergent series (p > q + 1)");
    if (!terminating && p == q + 1 && az > 1.0) throw DomainError("hyp_pfq: |z| > 1 requires continuation");
    if (az == 0.0) {
        if (error) *error = 0.0;
        if (terms) *terms = 1;
        return Real(1.0);
    }

    if (!terminating && p == q + 1 && az == 1.0) {
        double excess = 0.0;
        for (const auto& b : lo) excess += to_double(b);
        for (const auto& a : up) excess -= to_double(a);
        double zs = to_double(z) > 0 ? 1.0 : -1.0;
        if ((zs > 0 && excess <= 0.0) || (zs < 0 && excess <= -1.0))
            throw DomainError("hyp_pfq: series diverges at |z| = 1");
        return richardson_at_unit(up, lo, excess, zs, prec.max_terms, error, terms);
    }

    const double tol = prec.working_mode == WorkingMode::double_double || std::is_same_v<Real, DoubleDouble>
                           ? std::min(prec.target_rel_error, 1e-32)
                           : prec.target_rel_error * 1e-3;
    Accumulator<Real> acc;
    Real term(1.0);
    double abs_sum = 0.0;
    int small_run = 0;
    for (std::size_t n = 0; n < prec.max_terms; ++n) {
        acc.add(term);
        abs_sum += mag(term);
        Real next = term * term_ratio(up, lo, n) * z;
        if (next == Real(0.0)) {
            if (error) *error = abs_sum * 1e-16;
            if (terms) *terms = n + 1;
            return acc.sum;
        }
        if (mag(next) < tol * mag(acc.sum)) {
            ++small_run;
        } else {
            small_run = 0;
        }
        if (small_run >= 3) {
            double ratio = mag(term_ratio(up, lo, n + 1) * z);
            double bound_ratio = std::max(ratio, p == q + 1 ? az : ratio);
            double tail = bound_ratio < 1.0 ? mag(next) / (1.0 - bound_ratio) : mag(next) * 1e3;
            if (error) *error = tail + abs_sum * (std::is_same_v<Real, DoubleDouble> ? 1e-32 : 1.2e-16);
            if (terms) *terms = n + 2;
            acc.add(next);
            return acc.sum;
        }
        term = next;
    }
    throw NonConvergence("hyp_pfq: max_terms exceeded");
}

}  // namespace

void HyperParams::validate() const {
    for (double b : lower) {
        if (nonpositive_integer(b)) throw DomainError("HyperParams: lower parameter is a nonpositive integer");
    }
}

double HyperParams::excess() const {
    double e = 0.0;
    for (double b : lower) e += b;
    for (double a : upper) e -= a;
    return e;
}

Estimate hyp_pfq_estimate(const HyperParams& params, double z, const Precision& prec) {
    params.validate();
    if (!std::isfinite(z)) throw DomainError("hyp_pfq: non-finite argument");
    Estimate e;
    if (prec.working_mode == WorkingMode::double_double) {
        std::vector<DoubleDouble> up(params.upper.begin(), params.upper.end());
        std::vector<DoubleDouble> lo(params.lower.begin(), params.lower.end());
        e.value = to_double(pfq_impl<DoubleDouble>(up, lo, DoubleDouble(z), prec, &e.error, &e.terms));
    } else {
        e.value = pfq_impl<double>(params.upper, params.lower, z, prec, &e.error, &e.terms);
    }
    return e;
}

double hyp_pfq(const HyperParams& params, double z, const Precision& prec) {
    return hyp_pfq_estimate(params, z, prec).value;
}

DoubleDouble hyp_pfq_dd(const std::vector<DoubleDouble>& upper, const std::vector<DoubleDouble>& lower,
                        DoubleDouble z, const Precision& prec, double* error) {
    return pfq_impl<DoubleDouble>(upper, lower, z, prec, error, nullptr);
}

double hyp2f1_zero_balanced(double a, double b, double z, const Precision& prec) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("hyp2f1_zero_balanced: z outside [0, 1)");
    if (z <= 0.5) return hyp_pfq({{a, b}, {a + b}}, z, prec);
    // Expansion about z = 1 for c = a + b.
    double w = 1.0 - z;
    double lw = std::log(w);
    double coeff = 1.0;
    double psi1 = digamma(1.0), psia = digamma(a), psib = digamma(b);
    double sum = 0.0;
    for (std::size_t n = 0; n < prec.max_terms; ++n) {
        double term = coeff * (2.0 * psi1 - psia - psib - lw);
        sum += term;
        if (n > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
        double nn = static_cast<double>(n);
        coeff *= (a + nn) * (b + nn) / ((nn + 1.0) * (nn + 1.0)) * w;
        psi1 += 1.0 / (nn + 1.0);
        psia += 1.0 / (a + nn);
        psib += 1.0 / (b + nn);
    }
    return std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b)) * sum;
}

Estimate hyp32_log_continuation(double z, const Precision& prec) {
    prec.validate();
    if (!(z > 1.0) || !std::isfinite(z)) throw DomainError("hyp32_log_continuation: z must exceed 1");
    double u = 1.0 / z;
    double c = 1.0;
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;
    double f = 0.0, fc = 0.0, s = 0.0, sc = 0.0;
    double last = 0.0;
    std::size_t n = 0;
    for (; n < prec.max_terms; ++n) {
        double hterm = 5.0 * h1 - 2.0 * h2 - 3.0 * h3;
        double t1 = c, t2 = c * hterm;
        double y = t1 - fc, t = f + y;
        fc = (t - f) - y;
        f = t;
        y = t2 - sc, t = s + y;
        sc = (t - s) - y;
        s = t;
        last = std::abs(t1) + std::abs(t2);
        if (n > 4 && std::abs(t1) < 1e-18 * std::abs(f) && std::abs(t2) < 1e-18 * (std::abs(s) + std::abs(f)))
            break;
        double nn = static_cast<double>(n);
        c *= (nn + 1.0 / 3.0) * (nn + 0.5) * (nn + 2.0 / 3.0) / ((nn + 1.0) * (nn + 1.0) * (nn + 1.0)) * u;
        h1 += 1.0 / (nn + 1.0);
        h2 += 1.0 / (2.0 * nn + 1.0) + 1.0 / (2.0 * nn + 2.0);
        h3 += 1.0 / (3.0 * nn + 1.0) + 1.0 / (3.0 * nn + 2.0) + 1.0 / (3.0 * nn + 3.0);
    }
    if (n >= prec.max_terms) throw NonConvergence("hyp32_log_continuation: max_terms exceeded");
    double pre = 1.0 / (2.0 * std::sqrt(3.0 * z));
    Estimate e;
    e.value = pre * (std::log(108.0 * z) * f + s);
    e.error = pre * (last / (1.0 - u) + 1e-16 * (std::abs(std::log(108.0 * z) * f) + std::abs(s)));
    e.terms = n + 1;
    return e;
}

}  // namespace walkdens
