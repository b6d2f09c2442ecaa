#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "walkdens/errors.hpp"

namespace walkdens {

template <class V>
struct QuadResult {
    V value{};
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace quad_detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1].
inline constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V, class F>
QuadResult<V> kronrod15(F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    V fc = f(c);
    V resk = fc * wgk[7];
    V resg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        V f1 = f(c - dx);
        V f2 = f(c + dx);
        resk += (f1 + f2) * wgk[j];
        if (j % 2 == 1) resg += (f1 + f2) * wg[j / 2];
    }
    QuadResult<V> r;
    r.value = resk * h;
    r.error = magnitude((resk - resg) * h);
    r.evaluations = 15;
    return r;
}

}  // namespace quad_detail

// Globally adaptive Gauss-Kronrod integration over [a, b] with an optional initial partition.
template <class V, class F>
QuadResult<V> integrate_adaptive(F f, const std::vector<double>& breakpoints, double abs_tol, double rel_tol,
                                 std::size_t max_intervals = 4000) {
    struct Piece {
        double a, b;
        V value;
        double error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    QuadResult<V> total;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double a = breakpoints[i], b = breakpoints[i + 1];
        if (!(b > a)) continue;
        auto r = quad_detail::kronrod15<V>(f, a, b);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        heap.push({a, b, r.value, r.error});
    }
    while (!heap.empty()) {
        double tol = std::max(abs_tol, rel_tol * quad_detail::magnitude(total.value));
        if (total.error <= tol) break;
        if (heap.size() >= max_intervals) break;
        Piece p = heap.top();
        double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;
        heap.pop();
        auto left = quad_detail::kronrod15<V>(f, p.a, mid);
        auto right = quad_detail::kronrod15<V>(f, mid, p.b);
        total.value += left.value + right.value - p.value;
        total.error += left.error + right.error - p.error;
        total.evaluations += 30;
        heap.push({p.a, mid, left.value, left.error});
        heap.push({mid, p.b, right.value, right.error});
    }
    // Recompute the sums to shed accumulated update roundoff.
    V value{};
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    total.value = value;
    total.error = error;
    return total;
}

template <class V, class F>
QuadResult<V> integrate_adaptive(F f, double a, double b, double abs_tol, double rel_tol,
                                 std::size_t max_intervals = 4000) {
    return integrate_adaptive<V>(std::move(f), std::vector<double>{a, b}, abs_tol, rel_tol, max_intervals);
}

// Tanh-sinh quadrature on [a, b] for integrands with integrable endpoint singularities.
QuadResult<double> integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                               double rel_tol = 1e-14);

// Central-difference derivative of given order with Richardson extrapolation over step halving.
double richardson_derivative(const std::function<double(double)>& f, double x, int order, double h,
                             double* error = nullptr);

// High-order fixed stencil derivative (orders 1 and 2, accuracy O(h^8)).
double stencil_derivative(const std::function<double(double)>& f, double x, int order, double h);

}  // namespace walkdens
