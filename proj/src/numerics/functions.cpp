#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// zeta(2n) / (n (2n+1)) for n = 1..N, the Clausen small-angle coefficients.
const std::array<double, 64>& clausen_coefficients() {
    static const std::array<double, 64> table = [] {
        std::array<double, 64> t{};
        for (int n = 1; n < 64; ++n) t[n] = boost::math::zeta(2.0 * n) / (n * (2.0 * n + 1.0));
        return t;
    }();
    return table;
}

}  // namespace

double clausen(double theta, const Precision& prec) {
    prec.validate();
    if (!std::isfinite(theta)) throw DomainError("clausen: non-finite angle");
    double t = std::remainder(theta, 2.0 * pi);
    double sign = 1.0;
    if (t < 0) {
        t = -t;
        sign = -1.0;
    }
    if (t == 0.0) return 0.0;
    const auto& c = clausen_coefficients();
    double r2 = (t / (2.0 * pi)) * (t / (2.0 * pi));
    double pw = r2, sum = 0.0;
    for (int n = 1; n < 64; ++n) {
        double term = c[n] * pw;
        sum += term;
        if (term < 1e-18) break;
        pw *= r2;
    }
    return sign * (t - t * std::log(t) + t * sum);
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x)) throw PoleError("gamma: pole at nonpositive integer");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (is_nonpositive_integer(x)) throw PoleError("log_gamma: pole at nonpositive integer");
    return boost::math::lgamma(x);
}

double digamma(double x) {
    if (is_nonpositive_integer(x)) throw PoleError("digamma: pole at nonpositive integer");
    return boost::math::digamma(x);
}

double trigamma(double x) {
    if (is_nonpositive_integer(x)) throw PoleError("trigamma: pole at nonpositive integer");
    return boost::math::trigamma(x);
}

double harmonic(unsigned n) {
    double sum = 0.0, c = 0.0;
    for (unsigned k = n; k >= 1; --k) {
        double y = 1.0 / k - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double harmonic_half(unsigned n) {
    double sum = 0.0;
    for (unsigned k = n + 1; k >= 1; --k) sum += 1.0 / (2.0 * k - 1.0);
    return 2.0 * sum - 2.0 * std::numbers::ln2;
}

double euler_gamma() { return std::numbers::egamma; }

double zeta3() {
    static const double value = boost::math::zeta(3.0);
    return value;
}

double zeta4() { return pi * pi * pi * pi / 90.0; }

double li4_half() {
    static const double value = [] {
        DoubleDouble sum(0.0), pw(1.0);
        for (int k = 1; k < 120; ++k) {
            pw = pw * DoubleDouble(0.5);
            double k4 = static_cast<double>(k) * k * k * k;
            sum += pw / DoubleDouble(k4);
        }
        return to_double(sum);
    }();
    return value;
}

EtaValue dedekind_eta_checked(std::complex<double> tau, const Precision& prec) {
    prec.validate();
    if (!(tau.imag() > 0)) throw DomainError("dedekind_eta: Im(tau) must be positive");
    const std::complex<double> two_pi_i(0.0, 2.0 * pi);
    double log_abs_q = -2.0 * pi * tau.imag();
    auto qpow = [&](double m) { return std::exp(two_pi_i * tau * m); };

    std::complex<double> product(1.0, 0.0);
    std::size_t n = 1;
    for (; n <= prec.max_terms; ++n) {
        if (log_abs_q * n < std::log(1e-20)) break;
        product *= 1.0 - qpow(static_cast<double>(n));
    }
    if (n > prec.max_terms) throw NonConvergence("dedekind_eta: product did not converge");

    std::complex<double> series(1.0, 0.0);
    for (std::size_t m = 1; m <= prec.max_terms; ++m) {
        double md = static_cast<double>(m);
        double e1 = md * (3.0 * md - 1.0) / 2.0;
        double e2 = md * (3.0 * md + 1.0) / 2.0;
        double s = (m % 2) ? -1.0 : 1.0;
        series += s * (qpow(e1) + qpow(e2));
        if (log_abs_q * e1 < std::log(1e-20 * std::abs(series))) break;
    }
    std::complex<double> pre = std::exp(std::complex<double>(0.0, pi / 12.0) * tau);
    return {pre * series, series, std::abs(pre * (series - product))};
}

std::complex<double> dedekind_eta(std::complex<double> tau, const Precision& prec) {
    return dedekind_eta_checked(tau, prec).value;
}

ComplexPoint dedekind_eta(ComplexPoint tau, const Precision& prec) {
    auto v = dedekind_eta_checked({tau.re, tau.im}, prec).value;
    return {v.real(), v.imag()};
}

double eta_nome_product(double t) {
    if (!(t > 0)) throw DomainError("eta_nome: t must be positive");
    double prod = 1.0;
    for (int n = 1; n < 100000; ++n) {
        if (-t * n < std::log(1e-20)) break;
        prod *= -std::expm1(-t * n);
    }
    return std::exp(-t / 24.0) * prod;
}

double eta_nome_series(double t) {
    if (!(t > 0)) throw DomainError("eta_nome: t must be positive");
    double sum = 1.0;
    for (int m = 1; m < 100000; ++m) {
        double e1 = m * (3.0 * m - 1.0) / 2.0;
        double e2 = m * (3.0 * m + 1.0) / 2.0;
        double s = (m % 2) ? -1.0 : 1.0;
        sum += s * (std::exp(-t * e1) + std::exp(-t * e2));
        if (-t * e1 < std::log(1e-20 * std::abs(sum))) break;
    }
    return std::exp(-t / 24.0) * sum;
}

double eta_nome(double t) {
    if (!(t > 0)) throw DomainError("eta_nome: t must be positive");
    if (t >= 2.0 * pi) return eta_nome_product(t);
    double tt = 4.0 * pi * pi / t;
    return std::sqrt(2.0 * pi / t) * eta_nome_product(tt);
}

}  // namespace walkdens
