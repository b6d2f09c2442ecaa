#include "walkdens/densities/densities.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "walkdens/errors.hpp"
#include "walkdens/exact/polynomial.hpp"
#include "walkdens/moments/exact.hpp"
#include "walkdens/moments/residues.hpp"

namespace walkdens {

namespace {

constexpr double pi = std::numbers::pi;

template <class E>
E parse_enum(const std::string& name, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
    for (const auto& [n, e] : table)
        if (name == n) return e;
    throw InvalidParameter(std::string("unknown ") + what + ": " + name);
}

DispatchSeams current_seams;

}  // namespace

void DispatchSeams::validate() const {
    if (!(p3_series_limit > 0.0 && p3_series_limit < 1.0)) throw InvalidParameter("p3_series_limit must lie in (0, 1)");
    if (!(p4_series_limit > 0.0 && p4_series_limit < 2.0)) throw InvalidParameter("p4_series_limit must lie in (0, 2)");
    if (!(p4_quad_halfwidth >= 0.0 && p4_quad_halfwidth < 0.5))
        throw InvalidParameter("p4_quad_halfwidth must lie in [0, 0.5)");
    if (!(p4_edge_start > 3.5 && p4_edge_start <= 4.0)) throw InvalidParameter("p4_edge_start must lie in (3.5, 4]");
    if (!(p5_series_limit > 0.0 && p5_series_limit <= 1.0)) throw InvalidParameter("p5_series_limit must lie in (0, 1]");
}

const DispatchSeams& dispatch_seams() { return current_seams; }

void set_dispatch_seams(const DispatchSeams& seams) {
    seams.validate();
    current_seams = seams;
}

std::string to_string(DensityMethod m) {
    switch (m) {
        case DensityMethod::closed_form: return "closed_form";
        case DensityMethod::series0: return "series0";
        case DensityMethod::log_continuation: return "log_continuation";
        case DensityMethod::quadrature: return "quadrature";
        case DensityMethod::convolution: return "convolution";
        case DensityMethod::asym_edge: return "asym_edge";
    }
    return "unknown";
}

DensityMethod parse_density_method(const std::string& name) {
    return parse_enum<DensityMethod>(name,
                                     {{"closed_form", DensityMethod::closed_form},
                                      {"series0", DensityMethod::series0},
                                      {"log_continuation", DensityMethod::log_continuation},
                                      {"quadrature", DensityMethod::quadrature},
                                      {"convolution", DensityMethod::convolution},
                                      {"asym_edge", DensityMethod::asym_edge}},
                                     "density method");
}

P3Method parse_p3_method(const std::string& name) {
    return parse_enum<P3Method>(name,
                                {{"auto", P3Method::automatic},
                                 {"elliptic", P3Method::elliptic},
                                 {"hyper", P3Method::hyper},
                                 {"agm", P3Method::agm},
                                 {"series", P3Method::series}},
                                "p3 method");
}

P4Method parse_p4_method(const std::string& name) {
    return parse_enum<P4Method>(name,
                                {{"auto", P4Method::automatic},
                                 {"hyper", P4Method::hyper},
                                 {"series0", P4Method::series0},
                                 {"asym4", P4Method::asym4},
                                 {"quadrature", P4Method::quadrature}},
                                "p4 method");
}

P5Method parse_p5_method(const std::string& name) {
    return parse_enum<P5Method>(
        name, {{"auto", P5Method::automatic}, {"series0", P5Method::series0}, {"quadrature", P5Method::quadrature}},
        "p5 method");
}

double LogPowerSeries::eval(double x) const {
    if (!(x > 0.0)) return 0.0;
    const double lx = std::log(x);
    const double x2 = std::pow(x, step);
    double pw = std::pow(x, alpha);
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += (a[k] + (k < b.size() ? b[k] : 0.0) * lx) * pw;
        pw *= x2;
    }
    return sum;
}

EvalResult p2(double x) { return p2_two_step(x, 1.0, 1.0); }

EvalResult p2_two_step(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("p2_two_step: step lengths must be positive");
    EvalResult r;
    r.method = DensityMethod::closed_form;
    const double lo = std::abs(a - b), hi = a + b;
    if (x < lo || x > hi) {
        r.region = "outside support";
        return r;
    }
    if (x == hi || (x == lo && lo > 0.0)) {
        r.value = std::numeric_limits<double>::infinity();
        r.region = "support edge";
        r.singular = true;
        return r;
    }
    if (a == b) {
        // The factor x cancels against sqrt(x^2 - 0).
        r.value = 2.0 / (pi * std::sqrt((hi - x) * (hi + x)));
    } else {
        r.value = 2.0 * x / (pi * std::sqrt((hi - x) * (hi + x) * (x - lo) * (x + lo)));
    }
    r.err = 4.0 * std::numeric_limits<double>::epsilon() * r.value;
    r.region = "interior";
    return r;
}

double rayleigh(int n, double x) {
    if (n < 1) throw InvalidParameter("rayleigh: n must be positive");
    if (!(x > 0.0)) return 0.0;
    return 2.0 * x / n * std::exp(-x * x / n);
}

const LogPowerSeries& series_at_zero(int n, int K) {
    if (n < 3 || n > 5) throw DomainError("series_at_zero: n must be 3, 4 or 5");
    if (K < 1) throw InvalidParameter("series_at_zero: K must be positive");
    if (K > series_max_terms) throw GuardExceeded("series_at_zero: K exceeds 200");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<const LogPowerSeries>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, K}];
    if (slot) return *slot;
    auto s = std::make_unique<LogPowerSeries>();
    s->alpha = 1.0;
    s->step = 2;
    if (n == 3) {
        const auto w = even_moment_sequence(3, K - 1);
        const double c = 2.0 / (pi * std::sqrt(3.0));
        Integer pow9 = 1;
        for (int k = 0; k < K; ++k) {
            s->a.push_back(c * Rational(w[k], pow9).get_d());
            pow9 *= 9;
        }
        s->b.assign(K, 0.0);
        s->radius = 1.0;
    } else if (n == 4) {
        const auto t = residues(4, K);
        s->a = t.r4;
        for (double v : t.s4) s->b.push_back(-v);
        s->radius = 2.0;
    } else {
        const auto t = residues(5, K);
        s->a = t.r5;
        s->b.assign(K, 0.0);
        s->radius = 3.0;
    }
    slot = std::move(s);
    return *slot;
}

}  // namespace walkdens
