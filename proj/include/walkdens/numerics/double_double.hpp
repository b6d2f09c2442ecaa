#pragma once

// Unevaluated sum hi + lo of two doubles, about 31 significant digits.

#include <cmath>
#include <ostream>
#include <string>

namespace walkdens {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
    double to_double() const { return hi + lo; }

    DoubleDouble& operator+=(const DoubleDouble& o);
    DoubleDouble& operator-=(const DoubleDouble& o);
    DoubleDouble& operator*=(const DoubleDouble& o);
    DoubleDouble& operator/=(const DoubleDouble& o);
};

namespace dd_detail {

inline DoubleDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
    DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
    DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
    double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    double q3 = r.hi / b.hi;
    DoubleDouble q = dd_detail::quick_two_sum(q1, q2);
    return q + DoubleDouble(q3);
}

inline DoubleDouble& DoubleDouble::operator+=(const DoubleDouble& o) { return *this = *this + o; }
inline DoubleDouble& DoubleDouble::operator-=(const DoubleDouble& o) { return *this = *this - o; }
inline DoubleDouble& DoubleDouble::operator*=(const DoubleDouble& o) { return *this = *this * o; }
inline DoubleDouble& DoubleDouble::operator/=(const DoubleDouble& o) { return *this = *this / o; }

inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }
inline bool operator==(const DoubleDouble& a, const DoubleDouble& b) { return a.hi == b.hi && a.lo == b.lo; }

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0 ? -a : a; }
inline DoubleDouble fabs(const DoubleDouble& a) { return abs(a); }

inline DoubleDouble sqrt(const DoubleDouble& a) {
    if (a.hi <= 0.0) return DoubleDouble(std::sqrt(a.hi));
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DoubleDouble diff = a - dd_detail::two_prod(ax, ax);
    return dd_detail::two_sum(ax, diff.hi * (x * 0.5));
}

inline DoubleDouble cbrt(const DoubleDouble& a) {
    if (a.hi == 0.0) return DoubleDouble(0.0);
    DoubleDouble y(std::cbrt(a.hi));
    for (int i = 0; i < 2; ++i) y = y - (y * y * y - a) / (DoubleDouble(3.0) * y * y);
    return y;
}

inline double to_double(const DoubleDouble& a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

// Parse a decimal literal exactly enough for constants (digits, optional '.', optional exponent).
DoubleDouble dd_from_string(const std::string& text);
std::string dd_to_string(const DoubleDouble& a, int digits = 32);

inline std::ostream& operator<<(std::ostream& os, const DoubleDouble& a) { return os << dd_to_string(a); }

namespace dd_const {
inline constexpr DoubleDouble pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DoubleDouble log2{6.931471805599452862e-01, 2.319046813846299558e-17};
}  // namespace dd_const

}  // namespace walkdens
