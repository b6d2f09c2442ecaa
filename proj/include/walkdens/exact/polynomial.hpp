#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace walkdens {

using Integer = mpz_class;
using Rational = mpq_class;

// Dense univariate polynomial with rational coefficients; c[i] multiplies x^i.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& constant);
    Poly(long constant) : Poly(Rational(constant)) {}
    explicit Poly(std::vector<Rational> coeffs);

    static Poly x();
    static Poly monomial(const Rational& c, int degree);
    // Product of (x - r) over the given roots.
    static Poly from_roots(const std::vector<Rational>& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const;
    Rational leading() const;

    Rational eval(const Rational& v) const;
    double eval(double v) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& s);

    // p(q(x))
    Poly compose(const Poly& q) const;
    // p(x + a)
    Poly shift(const Rational& a) const;
    Poly derivative() const;
    Poly pow(unsigned e) const;

    // Euclidean division; throws DomainError on division by zero.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly monic() const;
    // Scale to integer coefficients with gcd 1 and positive leading coefficient.
    Poly primitive() const;

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(Poly a, const Poly& b);
Poly operator*(Poly a, const Rational& s);
Poly operator*(const Rational& s, Poly a);

Poly poly_gcd(const Poly& a, const Poly& b);

// Sparse bivariate polynomial sum c_{ij} x^i y^j.
class BiPoly {
public:
    using Key = std::pair<int, int>;

    BiPoly() = default;
    BiPoly(const Rational& constant);
    static BiPoly x();
    static BiPoly y();

    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator-=(const BiPoly& o);
    BiPoly& operator*=(const Rational& s);
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly pow(unsigned e) const;

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const BiPoly& o) const { return terms_ == o.terms_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    Rational eval(const Rational& xv, const Rational& yv) const;

private:
    void add_term(const Key& k, const Rational& v);
    std::map<Key, Rational> terms_;
};

Integer binomial(long n, long k);
Integer factorial(long n);
// Binomial coefficient C(a, k) for rational a and integer k >= 0.
Rational binomial_rational(const Rational& a, long k);

}  // namespace walkdens
