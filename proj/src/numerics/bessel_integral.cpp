#include "walkdens/numerics/bessel_integral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>

#include "walkdens/errors.hpp"
#include "walkdens/numerics/quadrature.hpp"
#include "walkdens/numerics/special.hpp"

namespace walkdens {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr int hankel_terms = 16;
constexpr double head_cutoff = 40.0;

struct FactorKey {
    int order;
    double scale;
    bool operator<(const FactorKey& o) const { return order != o.order ? order < o.order : scale < o.scale; }
};

// One frequency component e^{i omega t} * sum_k coef[k] t^{-k}; magnitude tracks cancellation.
struct Component {
    double omega = 0.0;
    std::vector<cplx> coef;
    std::vector<double> magnitude;
};

std::vector<Component> expand_product(const std::vector<BesselFactor>& factors) {
    std::vector<Component> states{{0.0, std::vector<cplx>(hankel_terms, 0.0), std::vector<double>(hankel_terms, 0.0)}};
    states[0].coef[0] = 1.0;
    states[0].magnitude[0] = 1.0;
    for (const auto& f : factors) {
        auto a = hankel_coefficients(f.order, hankel_terms);
        double phase = -f.order * pi / 2.0 - pi / 4.0;
        std::vector<cplx> plus(hankel_terms), minus(hankel_terms);
        cplx ik(1.0, 0.0);
        for (int k = 0; k < hankel_terms; ++k) {
            cplx h = a[k] * ik / std::pow(f.scale, k);
            plus[k] = h * std::polar(1.0, phase);
            minus[k] = std::conj(h) * std::polar(1.0, -phase);
            ik *= cplx(0.0, 1.0);
        }
        std::vector<Component> next;
        auto merge = [&](double omega, const std::vector<cplx>& coef, const std::vector<double>& mag) {
            for (auto& s : next) {
                if (std::abs(s.omega - omega) < 1e-12) {
                    for (int k = 0; k < hankel_terms; ++k) {
                        s.coef[k] += coef[k];
                        s.magnitude[k] += mag[k];
                    }
                    return;
                }
            }
            next.push_back({omega, coef, mag});
        };
        for (const auto& s : states) {
            for (int sign : {1, -1}) {
                const auto& h = sign > 0 ? plus : minus;
                std::vector<cplx> c(hankel_terms, 0.0);
                std::vector<double> m(hankel_terms, 0.0);
                for (int i = 0; i < hankel_terms; ++i) {
                    if (s.magnitude[i] == 0.0) continue;
                    for (int j = 0; i + j < hankel_terms; ++j) {
                        c[i + j] += s.coef[i] * h[j];
                        m[i + j] += s.magnitude[i] * std::abs(h[j]);
                    }
                }
                merge(s.omega + sign * f.scale, c, m);
            }
        }
        states = std::move(next);
    }
    return states;
}

double log_poly_value(const std::vector<double>& lp, double lt) {
    double v = 0.0;
    for (std::size_t q = lp.size(); q-- > 0;) v = v * lt + lp[q];
    return v;
}

cplx log_poly_value(const std::vector<double>& lp, cplx lt) {
    cplx v = 0.0;
    for (std::size_t q = lp.size(); q-- > 0;) v = v * lt + lp[q];
    return v;
}

// int_T^inf t^{-beta} (log t)^q dt for beta > 1.
double power_log_tail(double T, double beta, int q) {
    double lt = std::log(T);
    double b1 = beta - 1.0;
    double sum = 0.0, fact = 1.0;
    for (int r = 0; r <= q; ++r) {
        if (r > 0) fact *= (q - r + 1);
        sum += fact * std::pow(lt, q - r) / std::pow(b1, r + 1);
    }
    return std::pow(T, -b1) * sum;
}

}  // namespace

BesselIntegral integrate_bessel_product(const BesselIntegrand& in, const Precision& prec) {
    prec.validate();
    if (in.products.empty()) return {};
    std::map<FactorKey, int> index;
    double min_scale = 1e300, max_freq = 0.0;
    bool negative_shift = false;
    for (const auto& p : in.products) {
        if (p.factors.empty()) throw DomainError("integrate_bessel_product: empty product");
        negative_shift = negative_shift || p.power_shift < 0;
        double freq = 0.0;
        for (const auto& f : p.factors) {
            if (!(f.scale > 0.0)) throw DomainError("integrate_bessel_product: scales must be positive");
            if (f.order < 0) throw DomainError("integrate_bessel_product: negative order");
            min_scale = std::min(min_scale, f.scale);
            freq += f.scale;
            index.emplace(FactorKey{f.order, f.scale}, 0);
        }
        max_freq = std::max(max_freq, freq);
    }
    int slot = 0;
    std::vector<FactorKey> keys;
    for (auto& [k, v] : index) {
        v = slot++;
        keys.push_back(k);
    }
    std::vector<std::vector<int>> product_slots;
    for (const auto& p : in.products) {
        std::vector<int> s;
        for (const auto& f : p.factors) s.push_back(index[{f.order, f.scale}]);
        product_slots.push_back(s);
    }

    double T = std::max(head_cutoff, head_cutoff / min_scale);
    if (T > 2e5) throw NonConvergence("integrate_bessel_product: scale too small for finite head interval");

    std::vector<double> jv(keys.size());
    auto integrand = [&](double t) {
        for (std::size_t i = 0; i < keys.size(); ++i) jv[i] = bessel_jn(keys[i].order, keys[i].scale * t);
        double total = 0.0;
        if (t < in.series_radius && in.series_head) {
            total = in.series_head(t);
        } else {
            for (std::size_t i = 0; i < in.products.size(); ++i) {
                double prod = in.products[i].coefficient;
                for (int s : product_slots[i]) prod *= jv[s];
                if (in.products[i].power_shift != 0) prod *= std::pow(t, in.products[i].power_shift);
                total += prod;
            }
        }
        double lt = std::log(t);
        return std::pow(t, in.power) * log_poly_value(in.log_poly, lt) * total;
    };

    BesselIntegral result;
    double width = std::min(1.0, pi / max_freq);
    bool singular_origin = in.power != std::floor(in.power) || in.power < 0.0 || in.log_poly.size() > 1 ||
                           (negative_shift && !(in.series_head && in.series_radius > 0.0));
    double t0 = 0.0;
    double head = 0.0, head_err = 0.0;
    if (singular_origin) {
        t0 = width;
        auto r = integrate_endpoint_singular(integrand, 0.0, t0, 1e-15);
        head += r.value;
        head_err += r.error;
    }
    std::vector<double> bps;
    int panels = static_cast<int>(std::ceil((T - t0) / width));
    for (int i = 0; i <= panels; ++i) bps.push_back(t0 + (T - t0) * i / panels);
    double rel = std::min(prec.target_rel_error, 1e-13) * 0.1;
    auto hr = integrate_adaptive<double>(integrand, bps, 1e-17, rel, static_cast<std::size_t>(panels) * 8 + 100);
    head += hr.value;
    head_err += hr.error;

    // Tail from the Hankel expansions.
    cplx tail = 0.0;
    double tail_err = 0.0;
    for (std::size_t pi_idx = 0; pi_idx < in.products.size(); ++pi_idx) {
        const auto& p = in.products[pi_idx];
        double m = static_cast<double>(p.factors.size());
        double amp = p.coefficient * std::pow(0.5, m);
        for (const auto& f : p.factors) amp *= std::sqrt(2.0 / (pi * f.scale));
        double beta0 = m / 2.0 - in.power - p.power_shift;
        auto comps = expand_product(p.factors);
        for (const auto& c : comps) {
            std::vector<cplx> coef(hankel_terms);
            for (int k = 0; k < hankel_terms; ++k) coef[k] = amp * c.coef[k];
            tail_err += std::abs(coef[hankel_terms - 1]) * std::pow(T, -beta0 - hankel_terms + 1) * T;
            if (std::abs(c.omega) < 1e-12) {
                for (int k = 0; k < hankel_terms; ++k) {
                    double re = coef[k].real();
                    double scale = std::abs(amp) * c.magnitude[k];
                    if (std::abs(re) <= 1e-13 * scale) continue;
                    double beta = beta0 + k;
                    if (beta <= 1.0) {
                        result.divergent = true;
                        continue;
                    }
                    for (std::size_t q = 0; q < in.log_poly.size(); ++q) {
                        if (in.log_poly[q] == 0.0) continue;
                        tail += re * in.log_poly[q] * power_log_tail(T, beta, static_cast<int>(q));
                    }
                }
                continue;
            }
            double w = std::abs(c.omega);
            double sigma = c.omega > 0 ? 1.0 : -1.0;
            auto g = [&](double y) -> cplx {
                cplx t(T, sigma * y);
                cplx lt = std::log(t);
                cplx inv = 1.0 / t;
                cplx poly = 0.0;
                for (int k = hankel_terms; k-- > 0;) poly = poly * inv + coef[k];
                return std::exp(-beta0 * lt) * log_poly_value(in.log_poly, lt) * poly * std::exp(-w * y);
            };
            double Y = 46.0 / w;
            std::vector<double> ybps{0.0};
            for (double y = 0.25 * std::min(T, 1.0 / w); y < Y; y *= 2.0) ybps.push_back(y);
            ybps.push_back(Y);
            auto yr = integrate_adaptive<cplx>(g, ybps, 1e-18, rel, 2000);
            tail += cplx(0.0, sigma) * std::polar(1.0, c.omega * T) * yr.value;
            tail_err += yr.error;
        }
    }
    if (result.divergent) {
        result.value = std::numeric_limits<double>::infinity();
        result.error = std::numeric_limits<double>::infinity();
        return result;
    }
    result.value = head + tail.real();
    result.error = head_err + tail_err;
    return result;
}

}  // namespace walkdens
