#include "walkdens/holonomic/operators.hpp"

#include <algorithm>
#include <map>

#include "walkdens/errors.hpp"

namespace walkdens {

namespace {

Poly theta() { return Poly::x(); }

Poly lin(long a, long b) { return Poly(std::vector<Rational>{Rational(b), Rational(a)}); }  // a t + b

// S(m, i) for 0 <= i <= m <= max_m.
std::vector<std::vector<Integer>> stirling2(int max_m) {
    std::vector<std::vector<Integer>> s(max_m + 1, std::vector<Integer>(max_m + 1, 0));
    s[0][0] = 1;
    for (int m = 1; m <= max_m; ++m)
        for (int i = 1; i <= m; ++i) s[m][i] = Integer(i) * s[m - 1][i] + s[m - 1][i - 1];
    return s;
}

}  // namespace

ThetaOperator::ThetaOperator(std::vector<ThetaTerm> terms) {
    std::map<int, Poly> merged;
    for (auto& t : terms) merged[t.x_power] += t.theta;
    for (auto& [p, poly] : merged)
        if (!poly.is_zero()) terms_.push_back({p, std::move(poly)});
}

int ThetaOperator::order() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.theta.degree());
    return d;
}

Poly ThetaOperator::at(int x_power) const {
    for (const auto& t : terms_)
        if (t.x_power == x_power) return t.theta;
    return Poly();
}

ThetaOperator ThetaOperator::normalized() const {
    if (terms_.empty()) return *this;
    Integer den = 1, num = 0;
    for (const auto& t : terms_)
        for (const auto& v : t.theta.coeffs())
            if (v != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& t : terms_)
        for (const auto& v : t.theta.coeffs()) {
            if (v == 0) continue;
            Integer n = v.get_num() * (den / v.get_den());
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
        }
    Rational scale(den, num);
    scale.canonicalize();
    if (terms_.back().theta.leading() < 0) scale = -scale;
    const int low = terms_.front().x_power;
    std::vector<ThetaTerm> out;
    for (const auto& t : terms_) out.push_back({t.x_power - low, t.theta * scale});
    return ThetaOperator(std::move(out));
}

ThetaOperator ThetaOperator::operator+(const ThetaOperator& o) const {
    std::vector<ThetaTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return ThetaOperator(std::move(all));
}

ThetaOperator ThetaOperator::operator*(const Rational& s) const {
    std::vector<ThetaTerm> all = terms_;
    for (auto& t : all) t.theta *= s;
    return ThetaOperator(std::move(all));
}

bool ThetaOperator::operator==(const ThetaOperator& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].x_power != o.terms_[i].x_power || terms_[i].theta != o.terms_[i].theta) return false;
    return true;
}

ThetaOperator mellin_translate(const RecurrenceOperator& rec, int degree) {
    if (degree < 0) throw DomainError("mellin_translate: degree must be non-negative");
    Rational scale = 1;
    for (int i = 0; i < degree; ++i) scale *= -2;
    std::vector<ThetaTerm> terms;
    for (std::size_t j = 0; j < rec.coeffs.size(); ++j) {
        // k = (s - 1)/2 with s = -(theta + 2j) the Mellin variable seen by x^{2j}.
        const long jj = static_cast<long>(j);
        Poly arg(std::vector<Rational>{Rational(-(2 * jj + 1), 2), Rational(-1, 2)});
        terms.push_back({2 * static_cast<int>(j), rec.coeffs[j].compose(arg) * scale});
    }
    return ThetaOperator(std::move(terms));
}

ThetaOperator mellin_translate(const RecurrenceOperator& rec) { return mellin_translate(rec, rec.max_degree()); }

DxOperator theta_to_dx(const ThetaOperator& op) {
    const int ord = std::max(op.order(), 0);
    const auto s = stirling2(ord);
    DxOperator d;
    d.c.assign(ord + 1, Poly());
    for (const auto& t : op.terms()) {
        if (t.x_power < 0) throw DomainError("theta_to_dx: negative powers of x are not polynomial");
        const auto& pc = t.theta.coeffs();
        for (int m = 0; m < static_cast<int>(pc.size()); ++m) {
            if (pc[m] == 0) continue;
            for (int i = 0; i <= m; ++i) {
                if (s[m][i] == 0) continue;
                d.c[i] += Poly::monomial(pc[m] * Rational(s[m][i]), t.x_power + i);
            }
        }
    }
    while (d.c.size() > 1 && d.c.back().is_zero()) d.c.pop_back();
    return d;
}

Poly expected_leading_coefficient(int n) {
    if (n < 1) throw DomainError("expected_leading_coefficient: n must be positive");
    Poly p = Poly::monomial(1, n - 1);
    for (int m = 1; m <= n; ++m)
        if ((n - m) % 2 == 0) p *= Poly(std::vector<Rational>{Rational(-m * m), 0, 1});
    return p;
}

ThetaOperator a4_operator() {
    const Poly t = theta();
    return ThetaOperator({{4, lin(1, 1).pow(3)},
                          {2, Poly(-4) * t * (Poly(5) * t * t + Poly(3))},
                          {0, Poly(64) * lin(1, -1).pow(3)}});
}

ThetaOperator a5_operator() {
    const Poly t = theta();
    const Poly tm1 = lin(1, -1);
    const Poly q = Poly(15) * lin(1, -3) * tm1;
    return ThetaOperator({{6, lin(1, 1).pow(4)},
                          {4, -(Poly(35) * t.pow(4) + Poly(42) * t * t + Poly(3))},
                          {2, Poly(259) * tm1.pow(4) + Poly(104) * tm1 * tm1},
                          {0, -(q * q)}});
}

ThetaOperator b4_operator() {
    const Poly t = theta();
    return ThetaOperator({{2, Poly(64) * lin(1, 1).pow(3)},
                          {1, Poly(-2) * lin(2, 1) * (Poly(5) * t * t + Poly(5) * t + Poly(2))},
                          {0, t.pow(3)}});
}

}  // namespace walkdens
