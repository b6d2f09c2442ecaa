#include <algorithm>
#include <cmath>
#include <map>

#include "walkdens/errors.hpp"
#include "walkdens/holonomic/operators.hpp"

namespace walkdens {

namespace {

struct Image {
    Rational plain = 0;
    Rational log = 0;
};

struct ImageD {
    double plain = 0.0, log = 0.0;
    double plain_mag = 0.0, log_mag = 0.0;
};

int min_power(const ThetaOperator& op) {
    if (op.is_zero()) throw DomainError("annihilation_residual: zero operator");
    return op.terms().front().x_power;
}

void check_length(std::size_t a, std::size_t b, int K, int step) {
    if (K < 0) throw DomainError("annihilation_residual: K must be non-negative");
    if (step < 1) throw DomainError("annihilation_residual: step must be positive");
    if (a != b) throw DomainError("annihilation_residual: plain and log coefficient lists differ in length");
    if (a < static_cast<std::size_t>(K) + 1)
        throw DomainError("annihilation_residual: series too short for the requested orders");
}

}  // namespace

Rational annihilation_residual(const ThetaOperator& op, const ExactLogSeries& s, int K) {
    check_length(s.a.size(), s.b.size(), K, s.step);
    const long top = static_cast<long>(s.alpha) + min_power(op) + static_cast<long>(s.step) * K;
    std::map<long, Image> img;
    for (const auto& t : op.terms()) {
        const Poly dp = t.theta.derivative();
        for (std::size_t k = 0; k < s.a.size(); ++k) {
            const long e = s.alpha + static_cast<long>(s.step) * static_cast<long>(k);
            if (e + t.x_power > top) break;
            if (s.a[k] == 0 && s.b[k] == 0) continue;
            const Rational pe = t.theta.eval(Rational(e));
            Image& im = img[e + t.x_power];
            im.plain += s.a[k] * pe;
            if (s.b[k] != 0) {
                im.plain += s.b[k] * dp.eval(Rational(e));
                im.log += s.b[k] * pe;
            }
        }
    }
    Rational worst = 0;
    for (const auto& [e, im] : img) worst = std::max({worst, Rational(abs(im.plain)), Rational(abs(im.log))});
    return worst;
}

AnnihilationResult annihilation_residual(const ThetaOperator& op, const LogPowerSeries& s, int K) {
    check_length(s.a.size(), s.b.empty() ? s.a.size() : s.b.size(), K, s.step);
    const double top = s.alpha + min_power(op) + static_cast<double>(s.step) * K;
    // Exponents are alpha + integers; key them by the integer part above alpha.
    std::map<long, ImageD> img;
    for (const auto& t : op.terms()) {
        const Poly dp = t.theta.derivative();
        for (std::size_t k = 0; k < s.a.size(); ++k) {
            const long shift = static_cast<long>(s.step) * static_cast<long>(k);
            const double e = s.alpha + static_cast<double>(shift);
            if (e + t.x_power > top + 0.5) break;
            const double a = s.a[k], b = s.b.empty() ? 0.0 : s.b[k];
            const double pe = t.theta.eval(e), dpe = dp.eval(e);
            ImageD& im = img[shift + t.x_power];
            im.plain += a * pe + b * dpe;
            im.plain_mag += std::abs(a * pe) + std::abs(b * dpe);
            im.log += b * pe;
            im.log_mag += std::abs(b * pe);
        }
    }
    AnnihilationResult r;
    for (const auto& [e, im] : img) {
        r.max_abs = std::max({r.max_abs, std::abs(im.plain), std::abs(im.log)});
        if (im.plain_mag > 0.0) r.max_rel = std::max(r.max_rel, std::abs(im.plain) / im.plain_mag);
        if (im.log_mag > 0.0) r.max_rel = std::max(r.max_rel, std::abs(im.log) / im.log_mag);
    }
    return r;
}

ExactLogSeries domb_series(int K) {
    if (K < 1) throw DomainError("domb_series: K must be positive");
    const std::vector<Integer> w = even_moment_sequence(4, K - 1);
    ExactLogSeries s;
    s.alpha = 0;
    s.step = 1;
    for (int k = 0; k < K; ++k) {
        s.a.emplace_back(w[k]);
        s.b.emplace_back(0);
    }
    return s;
}

ExactLogSeries domb_log_series(int K) {
    // Coefficient of z^k in B4 (y0 log z + g), read off with the log rule:
    // sum_p [P_p'(k - p) c_{k-p} + P_p(k - p) g_{k-p}] = 0, with P_0(t) = t^3 vanishing to third order.
    const ExactLogSeries y0 = domb_series(K);
    const ThetaOperator b4 = b4_operator();
    const Poly p0 = b4.at(0);
    ExactLogSeries s;
    s.alpha = 0;
    s.step = 1;
    s.b = y0.a;
    s.a.assign(K, Rational(0));
    for (int k = 1; k < K; ++k) {
        Rational acc = 0;
        for (const auto& t : b4.terms()) {
            const int i = k - t.x_power;
            if (i < 0) continue;
            acc += t.theta.derivative().eval(Rational(i)) * y0.a[i];
            if (t.x_power > 0) acc += t.theta.eval(Rational(i)) * s.a[i];
        }
        s.a[k] = -acc / p0.eval(Rational(k));
    }
    return s;
}

ExactLogSeries p4_exact_series(int K) {
    const ExactLogSeries y1 = domb_log_series(K);
    ExactLogSeries s;
    s.alpha = 1;
    s.step = 2;
    Rational scale = 1;
    for (int k = 0; k < K; ++k) {
        s.a.push_back(y1.a[k] * scale);
        s.b.push_back(2 * y1.b[k] * scale);
        scale /= 64;
    }
    return s;
}

ExactLogSeries p5_exact_series(int K, const Rational& r0, const Rational& r1) {
    if (K < 2) throw DomainError("p5_exact_series: K must be at least 2");
    ExactLogSeries s;
    s.alpha = 1;
    s.step = 2;
    s.a = {r0, r1};
    for (long k = 0; k + 2 < K; ++k) {
        const Rational u(2 * k + 2), v(2 * k + 1), w(2 * k);
        const Rational lead = 225 * u * u * (2 * k + 4) * (2 * k + 4);
        Rational rhs = (259 * u * u * u * u + 104 * u * u) * s.a[k + 1] -
                       (35 * v * v * v * v + 42 * v * v + 3) * s.a[k];
        if (k >= 1) rhs += w * w * w * w * s.a[k - 1];
        s.a.push_back(rhs / lead);
    }
    s.b.assign(s.a.size(), Rational(0));
    return s;
}

}  // namespace walkdens
