#include <cmath>
#include <numbers>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;

// Kahan-compensated accumulator.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

std::vector<double> hankel_coefficients(int nu, int count) {
    std::vector<double> a(static_cast<std::size_t>(count));
    if (count == 0) return a;
    a[0] = 1.0;
    double mu = 4.0 * nu * nu;
    for (int k = 1; k < count; ++k) {
        double odd = 2.0 * k - 1.0;
        a[k] = a[k - 1] * (mu - odd * odd) / (8.0 * k);
    }
    return a;
}

DoubleDouble bessel_j_series(int m, double x) {
    if (m < 0) throw DomainError("bessel_j_series: negative order");
    DoubleDouble half(x * 0.5);
    DoubleDouble term(1.0);
    for (int j = 1; j <= m; ++j) term = term * half / DoubleDouble(static_cast<double>(j));
    DoubleDouble q = -(half * half);
    DoubleDouble sum = term;
    double peak = std::abs(term.hi);
    for (int k = 1; k < 400; ++k) {
        term = term * q / DoubleDouble(static_cast<double>(k) * (k + m));
        sum += term;
        double t = std::abs(term.hi);
        peak = std::max(peak, t);
        if (k > half.hi && t <= 1e-33 * peak) return sum;
    }
    throw NonConvergence("bessel_j_series: no convergence");
}

double bessel_j_asymptotic(int m, double x) {
    double mu = 4.0 * m * m;
    double p = 0.0, q = 0.0;
    double term = 1.0;
    double prev = 1e300;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            double odd = 2.0 * k - 1.0;
            term *= (mu - odd * odd) / (8.0 * k * x);
        }
        double mag = std::abs(term);
        if (mag > prev) break;
        prev = mag;
        // Sign pattern of Re/Im of i^k.
        switch (k % 4) {
            case 0: p += term; break;
            case 1: q += term; break;
            case 2: p -= term; break;
            default: q -= term; break;
        }
        if (mag < 1e-18) break;
    }
    // chi = x - (2m+1) pi / 4
    double phase = (2 * m + 1) % 8 * pi / 4.0;
    double cp = std::cos(phase), sp = std::sin(phase);
    double cx = std::cos(x), sx = std::sin(x);
    double cchi = cx * cp + sx * sp;
    double schi = sx * cp - cx * sp;
    return std::sqrt(2.0 / (pi * x)) * (p * cchi - q * schi);
}

double bessel_j(int order, double x, const Precision& prec) {
    if (order != 0 && order != 1) throw DomainError("bessel_j: order must be 0 or 1");
    if (!std::isfinite(x)) throw DomainError("bessel_j: non-finite argument");
    prec.validate();
    double sign = 1.0;
    if (x < 0) {
        x = -x;
        if (order == 1) sign = -1.0;
    }
    if (x < bessel_crossover) return sign * to_double(bessel_j_series(order, x));
    return sign * bessel_j_asymptotic(order, x);
}

double bessel_jn(int m, double x) {
    if (m < 0 || m > 16) throw DomainError("bessel_jn: order outside 0..16");
    double sign = 1.0;
    if (x < 0) {
        x = -x;
        if (m % 2) sign = -1.0;
    }
    if (x < bessel_crossover) return sign * to_double(bessel_j_series(m, x));
    double j0 = bessel_j_asymptotic(0, x);
    if (m == 0) return sign * j0;
    double j1 = bessel_j_asymptotic(1, x);
    for (int k = 1; k < m; ++k) {
        double j2 = 2.0 * k / x * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    return sign * j1;
}

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x <= 25.0) {
        double q = 0.25 * x * x;
        KahanSum sum;
        double term = 1.0;
        sum.add(term);
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum.add(term);
            if (term < 1e-17 * sum.sum) break;
        }
        return sum.sum * std::exp(-x);
    }
    // e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k |a_k(0)| / x^k
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 40; ++k) {
        double odd = 2.0 * k - 1.0;
        double next = term * odd * odd / (8.0 * k * x);
        if (next > term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

double bessel_k0_scaled(double x) {
    if (!(x > 0)) throw DomainError("K0 requires x > 0");
    if (x <= 2.0) {
        double q = 0.25 * x * x;
        double i0 = 1.0, tail = 0.0, term = 1.0, h = 0.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / (static_cast<double>(k) * k);
            h += 1.0 / k;
            i0 += term;
            tail += term * h;
            if (term < 1e-18) break;
        }
        return (-(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail) * std::exp(x);
    }
    if (x < 25.0) {
        // e^{x} K_0(x) = int_0^inf exp(-x (cosh t - 1)) dt; trapezoid converges geometrically.
        const double h = 0.05;
        double sum = 0.5;
        for (int k = 1; k < 2000; ++k) {
            double t = k * h;
            double e = x * (std::cosh(t) - 1.0);
            if (e > 46.0) break;
            sum += std::exp(-e);
        }
        return sum * h;
    }
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 40; ++k) {
        double odd = 2.0 * k - 1.0;
        double next = -term * odd * odd / (8.0 * k * x);
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17) break;
    }
    return sum * std::sqrt(pi / (2.0 * x));
}

double modified_bessel(ModifiedKind kind, double x, const Precision& prec) {
    prec.validate();
    if (kind == ModifiedKind::I0) {
        if (x < 0) throw DomainError("I0 requires x >= 0");
        return bessel_i0_scaled(x) * std::exp(x);
    }
    if (!(x > 0)) throw DomainError("K0 requires x > 0");
    return bessel_k0_scaled(x) * std::exp(-x);
}

}  // namespace walkdens
