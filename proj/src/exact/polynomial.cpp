#include "walkdens/exact/polynomial.hpp"

#include <sstream>

#include "walkdens/errors.hpp"

namespace walkdens {

Poly::Poly(const Rational& constant) {
    if (constant != 0) c_.push_back(constant);
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::x() { return Poly(std::vector<Rational>{0, 1}); }

Poly Poly::monomial(const Rational& c, int degree) {
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
    v[degree] = c;
    return Poly(std::move(v));
}

Poly Poly::from_roots(const std::vector<Rational>& roots) {
    Poly p(1);
    for (const auto& r : roots) p *= Poly(std::vector<Rational>{-r, 1});
    return p;
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[i];
}

Rational Poly::leading() const { return c_.empty() ? Rational(0) : c_.back(); }

Rational Poly::eval(const Rational& v) const {
    Rational r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * v + c_[i];
    return r;
}

double Poly::eval(double v) const {
    double r = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * v + c_[i].get_d();
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Poly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

Poly& Poly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
}

Poly Poly::compose(const Poly& q) const {
    Poly r;
    for (std::size_t i = c_.size(); i-- > 0;) {
        r *= q;
        r += Poly(c_[i]);
    }
    return r;
}

Poly Poly::shift(const Rational& a) const { return compose(Poly(std::vector<Rational>{a, 1})); }

Poly Poly::derivative() const {
    std::vector<Rational> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<long>(i));
    return Poly(std::move(r));
}

Poly Poly::pow(unsigned e) const {
    Poly r(1), base = *this;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw DomainError("Poly::divmod: division by zero polynomial");
    Poly q, r = *this;
    std::vector<Rational> qc(std::max(0, degree() - d.degree() + 1), Rational(0));
    while (!r.is_zero() && r.degree() >= d.degree()) {
        int shift = r.degree() - d.degree();
        Rational f = r.leading() / d.leading();
        qc[shift] = f;
        r -= monomial(f, shift) * d;
    }
    return {Poly(std::move(qc)), r};
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * Rational(1 / leading());
}

Poly Poly::primitive() const {
    if (is_zero()) return *this;
    Integer den = 1, num = 0;
    for (const auto& v : c_) {
        if (v == 0) continue;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    }
    for (const auto& v : c_) {
        if (v == 0) continue;
        Integer n = v.get_num() * (den / v.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (leading() < 0) scale = -scale;
    return *this * scale;
}

std::string Poly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const Rational& v = c_[i];
        if (v == 0) continue;
        Rational a = abs(v);
        if (first) {
            if (v < 0) os << "-";
        } else {
            os << (v < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = a == 1;
        if (!unit || i == 0) os << a.get_str();
        if (i >= 1) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }
Poly operator*(Poly a, const Poly& b) { return a *= b; }
Poly operator*(Poly a, const Rational& s) { return a *= s; }
Poly operator*(const Rational& s, Poly a) { return a *= s; }

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x.divmod(y).second;
        x = y;
        y = r.monic();
    }
    return x.monic();
}

BiPoly::BiPoly(const Rational& constant) {
    if (constant != 0) terms_[{0, 0}] = constant;
}

BiPoly BiPoly::x() {
    BiPoly p;
    p.terms_[{1, 0}] = 1;
    return p;
}

BiPoly BiPoly::y() {
    BiPoly p;
    p.terms_[{0, 1}] = 1;
    return p;
}

void BiPoly::add_term(const Key& k, const Rational& v) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        if (v != 0) terms_.emplace(k, v);
        return;
    }
    it->second += v;
    if (it->second == 0) terms_.erase(it);
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    for (const auto& [k, v] : o.terms_) add_term(k, v);
    return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
    for (const auto& [k, v] : o.terms_) add_term(k, -v);
    return *this;
}

BiPoly& BiPoly::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= s;
    return *this;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
    BiPoly r;
    for (const auto& [k1, v1] : terms_)
        for (const auto& [k2, v2] : o.terms_) r.add_term({k1.first + k2.first, k1.second + k2.second}, v1 * v2);
    return r;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly r = *this;
    return r += o;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
    BiPoly r = *this;
    return r -= o;
}

BiPoly BiPoly::pow(unsigned e) const {
    BiPoly r(1), base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

Rational BiPoly::eval(const Rational& xv, const Rational& yv) const {
    Rational s = 0;
    for (const auto& [k, v] : terms_) {
        Rational t = v;
        for (int i = 0; i < k.first; ++i) t *= xv;
        for (int j = 0; j < k.second; ++j) t *= yv;
        s += t;
    }
    return s;
}

Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Integer factorial(long n) {
    if (n < 0) throw DomainError("factorial: negative argument");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

Rational binomial_rational(const Rational& a, long k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (long j = 0; j < k; ++j) {
        r *= (a - j);
        r /= (j + 1);
    }
    return r;
}

}  // namespace walkdens
