#include "walkdens/numerics/double_double.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "walkdens/errors.hpp"

namespace walkdens {

namespace {

DoubleDouble pow10(int e) {
    DoubleDouble r(1.0);
    DoubleDouble base = e >= 0 ? DoubleDouble(10.0) : DoubleDouble(1.0) / DoubleDouble(10.0);
    int n = std::abs(e);
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

}  // namespace

DoubleDouble dd_from_string(const std::string& text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    DoubleDouble mantissa(0.0);
    int exponent = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * DoubleDouble(10.0) + DoubleDouble(c - '0');
            if (seen_point) --exponent;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw InvalidParameter("not a number: " + text);
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        exponent += std::atoi(text.c_str() + i + 1);
    }
    DoubleDouble r = exponent >= 0 ? mantissa * pow10(exponent) : mantissa / pow10(-exponent);
    return negative ? -r : r;
}

std::string dd_to_string(const DoubleDouble& a, int digits) {
    if (a.hi == 0.0) return "0";
    std::string out;
    DoubleDouble v = a;
    if (v.hi < 0) {
        out += '-';
        v = -v;
    }
    int e = static_cast<int>(std::floor(std::log10(v.hi)));
    v = e >= 0 ? v / pow10(e) : v * pow10(-e);
    if (v.hi >= 10.0) {
        v /= DoubleDouble(10.0);
        ++e;
    } else if (v.hi < 1.0) {
        v *= DoubleDouble(10.0);
        --e;
    }
    for (int d = 0; d < digits; ++d) {
        int digit = static_cast<int>(std::floor(v.hi));
        if (digit > 9) digit = 9;
        if (digit < 0) digit = 0;
        out += static_cast<char>('0' + digit);
        if (d == 0) out += '.';
        v = (v - DoubleDouble(digit)) * DoubleDouble(10.0);
    }
    out += "e" + std::to_string(e);
    return out;
}

}  // namespace walkdens
