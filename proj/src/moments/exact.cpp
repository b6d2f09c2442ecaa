#include "walkdens/moments/exact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "walkdens/errors.hpp"

namespace walkdens {

namespace {

void check_guard(int n, int k) {
    if (n < 1) throw DomainError("even_moment_exact: n must be >= 1");
    if (k < 0) throw DomainError("even_moment_exact: k must be >= 0");
    if (n > even_moment_max_n || k > even_moment_max_k)
        throw GuardExceeded("even_moment_exact: (n, k) = (" + std::to_string(n) + ", " + std::to_string(k) +
                            ") beyond the composition guard");
}

// Values of the unnormalised coefficient c_j(k), j = 0..lambda, at an integer point k > lambda.
// Works with integers by carrying the product of (k - i + 1)^(n - 1) for the denominators.
std::vector<Rational> verrill_point(int n, long k) {
    const int lam = (n + 1) / 2;
    std::vector<Rational> out;
    out.reserve(lam + 1);
    Integer kpow;
    mpz_ui_pow_ui(kpow.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(n + 1));
    out.emplace_back(kpow);

    std::vector<Integer> prev, cur(n + 3);
    Integer denom = 1;
    for (int i = 1; i <= lam; ++i) {
        Integer N = k - i, D = k - i + 1;
        std::vector<Integer> npow(n + 1), dpow(n + 1);
        npow[0] = 1;
        dpow[0] = 1;
        for (int a = 1; a <= n; ++a) {
            npow[a] = npow[a - 1] * N;
            dpow[a] = dpow[a - 1] * D;
        }
        // Suffix sums of the previous level: sequences whose next element is at most a - 2.
        std::vector<Integer> suffix(n + 5, 0);
        if (i > 1)
            for (int a = n; a >= 0; --a) suffix[a] = suffix[a + 1] + prev[a];
        std::fill(cur.begin(), cur.end(), Integer(0));
        Integer level = 0;
        for (int a = 1; a <= n; ++a) {
            Integer s = i == 1 ? Integer(1) : Integer(suffix[a + 2]);
            if (s == 0) continue;
            cur[a] = -Integer(a) * Integer(n + 1 - a) * npow[a - 1] * dpow[n - a] * s;
            level += cur[a];
        }
        denom *= dpow[n - 1];
        Integer num = kpow * level;
        if (mpz_divisible_p(num.get_mpz_t(), denom.get_mpz_t())) {
            mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), denom.get_mpz_t());
            out.emplace_back(num);
        } else {
            out.emplace_back(Rational(num, denom));
            out.back().canonicalize();
        }
        prev = cur;
    }
    return out;
}

// Interpolating polynomial through (k0 + t, v[t]) by Newton forward differences.
Poly interpolate_unit_grid(long k0, std::vector<Rational> v) {
    const int d = static_cast<int>(v.size()) - 1;
    for (int m = 1; m <= d; ++m)
        for (int t = d; t >= m; --t) v[t] -= v[t - 1];
    Poly q(v[d]);
    for (int m = d - 1; m >= 0; --m) {
        q *= Poly(std::vector<Rational>{Rational(-(k0 + m), m + 1), Rational(1, m + 1)});
        q += Poly(v[m]);
    }
    return q;
}

}  // namespace

std::vector<Integer> even_moment_sequence(int n, int K) {
    if (n < 1 || K < 0) throw DomainError("even_moment_sequence: need n >= 1 and K >= 0");
    std::vector<std::vector<Integer>> binom2(K + 1);
    for (int k = 0; k <= K; ++k) {
        binom2[k].resize(k + 1);
        for (int a = 0; a <= k; ++a) {
            Integer b = binomial(k, a);
            binom2[k][a] = b * b;
        }
    }
    std::vector<Integer> w(K + 1, 1);  // n = 1: |e^{i t}|^{2k} = 1
    for (int m = 2; m <= n; ++m) {
        std::vector<Integer> next(K + 1, 0);
        for (int k = 0; k <= K; ++k)
            for (int a = 0; a <= k; ++a) next[k] += binom2[k][a] * w[k - a];
        w = std::move(next);
    }
    return w;
}

Integer even_moment_exact(int n, int k) {
    check_guard(n, k);
    return even_moment_sequence(n, k)[k];
}

int RecurrenceOperator::max_degree() const {
    int d = -1;
    for (const auto& q : coeffs) d = std::max(d, q.degree());
    return d;
}

Rational RecurrenceOperator::apply(const std::vector<Rational>& f, long k) const {
    if (k < 0 || static_cast<std::size_t>(k + order()) >= f.size())
        throw DomainError("RecurrenceOperator::apply: sequence too short");
    Rational s = 0;
    Rational kk(k);
    for (int j = 0; j <= order(); ++j) s += coeffs[j].eval(kk) * f[k + j];
    return s;
}

Rational RecurrenceOperator::apply(const std::vector<Integer>& f, long k) const {
    std::vector<Rational> r(f.begin(), f.end());
    return apply(r, k);
}

double RecurrenceOperator::coeff_at(int j, double k) const {
    // Expand around the nearest integer so values near integer roots keep their relative accuracy.
    const Poly& q = coeffs.at(j);
    const double k0 = std::nearbyint(k);
    if (k0 == 0.0 || std::abs(k0) > 1e6) return q.eval(k);
    return q.shift(Rational(static_cast<long>(k0))).eval(k - k0);
}

RecurrenceOperator RecurrenceOperator::operator+(const RecurrenceOperator& o) const {
    RecurrenceOperator r;
    r.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()));
    for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
        if (j < coeffs.size()) r.coeffs[j] += coeffs[j];
        if (j < o.coeffs.size()) r.coeffs[j] += o.coeffs[j];
    }
    while (r.coeffs.size() > 1 && r.coeffs.back().is_zero()) r.coeffs.pop_back();
    return r;
}

RecurrenceOperator verrill_operator(int n) {
    if (n < 1) throw DomainError("verrill_operator: n must be >= 1");
    const int lam = (n + 1) / 2;
    // Each c_j is k^{n+1} times a degree-zero rational function; n + 2 nodes determine it and two
    // extra nodes confirm that it is a polynomial.
    const int nodes = n + 2;
    const int checks = 2;
    const long k0 = lam + 2;
    std::vector<std::vector<Rational>> values(lam + 1);
    for (int t = 0; t < nodes + checks; ++t) {
        auto v = verrill_point(n, k0 + t);
        for (int j = 0; j <= lam; ++j) values[j].push_back(v[j]);
    }
    std::vector<Poly> c(lam + 1);
    for (int j = 0; j <= lam; ++j) {
        std::vector<Rational> fit(values[j].begin(), values[j].begin() + nodes);
        c[j] = interpolate_unit_grid(k0, fit);
        for (int t = nodes; t < nodes + checks; ++t) {
            if (c[j].eval(Rational(k0 + t)) != values[j][t])
                throw NonConvergence("verrill_operator: coefficient is not a polynomial of the expected degree");
        }
    }
    // Remove the common power of k.
    int common = 1 << 30;
    for (const auto& p : c) {
        if (p.is_zero()) continue;
        int z = 0;
        while (p.coeff(z) == 0) ++z;
        common = std::min(common, z);
    }
    for (auto& p : c) {
        if (p.is_zero()) continue;
        std::vector<Rational> v(p.coeffs().begin() + common, p.coeffs().end());
        p = Poly(std::move(v));
    }
    // c_j multiplies f(k - j); shift so that q_{lam - j}(k) = c_j(k + lam) multiplies f(k + lam - j).
    RecurrenceOperator op;
    op.coeffs.resize(lam + 1);
    for (int j = 0; j <= lam; ++j) op.coeffs[lam - j] = c[j].shift(Rational(lam));
    // Content-free integer normalisation across all coefficients.
    Integer den = 1, num = 0;
    for (const auto& q : op.coeffs)
        for (const auto& v : q.coeffs()) {
            if (v == 0) continue;
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
        }
    for (const auto& q : op.coeffs)
        for (const auto& v : q.coeffs()) {
            if (v == 0) continue;
            Integer t = v.get_num() * (den / v.get_den());
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.get_mpz_t());
        }
    Rational scale(den, num);
    scale.canonicalize();
    if (op.coeffs.back().leading() < 0) scale = -scale;
    for (auto& q : op.coeffs) q *= scale;
    return op;
}

const RecurrenceOperator& cached_verrill_operator(int n) {
    static std::mutex mu;
    static std::map<int, RecurrenceOperator> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, verrill_operator(n)).first;
    return it->second;
}

Poly char_poly(int n) {
    if (n < 1) throw DomainError("char_poly: n must be >= 1");
    const int lam = (n + 1) / 2;
    // E[a][j]: sum over gap-2 sequences of length j drawn from {1..a} of prod -a_i (n + 1 - a_i).
    std::vector<std::vector<Integer>> E(n + 1, std::vector<Integer>(lam + 1, 0));
    for (int a = 0; a <= n; ++a) E[a][0] = 1;
    for (int a = 1; a <= n; ++a) {
        Integer w = -Integer(a) * Integer(n + 1 - a);
        for (int j = 1; j <= lam; ++j) {
            E[a][j] = E[a - 1][j];
            if (a >= 2)
                E[a][j] += w * E[a - 2][j - 1];
            else if (j == 1)
                E[a][j] += w;
        }
    }
    std::vector<Rational> c(lam + 1);
    for (int j = 0; j <= lam; ++j) c[lam - j] = E[n][j];
    return Poly(std::move(c));
}

Poly char_poly_product(int n) {
    std::vector<Rational> roots;
    for (int m = 1; m <= n; ++m)
        if ((n - m) % 2 == 0) roots.emplace_back(m * m);
    return Poly::from_roots(roots);
}

Poly leading_char_poly(const RecurrenceOperator& op) {
    int d = op.max_degree();
    std::vector<Rational> c(op.coeffs.size());
    for (std::size_t j = 0; j < op.coeffs.size(); ++j) c[j] = op.coeffs[j].coeff(d);
    return Poly(std::move(c)).monic();
}

}  // namespace walkdens
