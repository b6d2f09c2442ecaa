#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "walkdens/densities/densities.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/moments/analytic.hpp"
#include "walkdens/oracle/oracle.hpp"

using namespace walkdens;

TEST_CASE("single draws") {
    CounterRng a({7, 0}), b({7, 0}), c({7, 1});
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
    CounterRng g({1, 2});
    for (int i = 0; i < 1000; ++i) CHECK(sample_distance(1, g) == 1.0);
    for (int n = 2; n <= 7; ++n)
        for (int i = 0; i < 200; ++i) {
            const double r = sample_distance(n, g);
            CHECK(r >= 0.0);
            CHECK(r <= n);
        }
    CHECK_THROWS_AS(sample_distance(0, g), DomainError);
    CounterRng u({3, 0});
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = u.next_unit();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0);
    CHECK(lo < 1e-3);
    CHECK(hi < 1.0);
    CHECK(hi > 0.999);
}

TEST_CASE("histograms are reproducible and mergeable") {
    const WalkHistogram a = estimate_density(5, 50, 20000, {42, 0});
    const WalkHistogram b = estimate_density(5, 50, 20000, {42, 0});
    CHECK(a.counts == b.counts);
    const WalkHistogram c = estimate_density(5, 50, 20000, {42, 1});
    CHECK(a.counts != c.counts);
    long long total = 0;
    double mass = 0.0;
    for (std::size_t i = 0; i < a.bins(); ++i) {
        total += a.counts[i];
        mass += a.density(i) * a.width(i);
    }
    CHECK(total == a.samples);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.edges.front() == 0.0);
    CHECK(a.edges.back() == 5.0);
    CHECK(std::is_sorted(a.edges.begin(), a.edges.end()));

    // Merging is order independent.
    WalkHistogram ab = empty_histogram(5, 50), ba = empty_histogram(5, 50);
    ab.merge(a);
    ab.merge(c);
    ba.merge(c);
    ba.merge(a);
    CHECK(ab.counts == ba.counts);
    CHECK(ab.samples == 40000);
    CHECK_THROWS_AS(ab.merge(estimate_density(5, 40, 20000, {1, 0})), InvalidParameter);

    const WalkHistogram one = estimate_density(1, 10, 10000, {5, 0});
    CHECK(one.counts.back() == 10000);
    CHECK(one.to_csv().rfind("left,right,count,density,stderr\n", 0) == 0);

    CHECK_THROWS_AS(estimate_density(3, 9, 10000, {}), DomainError);
    CHECK_THROWS_AS(estimate_density(3, 10, 9999, {}), DomainError);
    CHECK_THROWS_AS(estimate_density(3, 10, max_samples + 1, {}), GuardExceeded);
}

TEST_CASE("two steps: mass below 1 is 1/3") {
    const WalkHistogram h = estimate_density(2, 100, 1000000, {11, 0});
    long long below = 0;
    for (std::size_t i = 0; i < 50; ++i) below += h.counts[i];
    const double p = static_cast<double>(below) / 1e6;
    const double sigma = std::sqrt(p * (1.0 - p) / 1e6);
    CHECK(std::abs(p - 1.0 / 3.0) < 3.0 * sigma);
}

TEST_CASE("three steps: chi-square against the density") {
    const WalkHistogram h = estimate_density(3, 60, 1000000, {2024, 0});
    const auto probs = bin_probabilities(h, [](double x) { return p3(x).value; }, {1.0});
    double total = 0.0;
    for (double p : probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    const ChiSquare c = chi_square_test(h, probs);
    CHECK(c.dof == 59);
    CHECK(c.p_value > 0.001);
    // The same counts against the four-step density are rejected outright.
    const auto wrong = bin_probabilities(h, [](double x) { return x <= 3.0 ? p4(x).value : 0.0; }, {2.0});
    CHECK(chi_square_test(h, wrong).p_value < 1e-10);
}

TEST_CASE("five steps: histogram peak near the density's maximum") {
    const WalkHistogram h = estimate_density(5, 50, 1000000, {99, 0});
    const std::size_t peak = static_cast<std::size_t>(std::max_element(h.counts.begin(), h.counts.end()) -
                                                      h.counts.begin());
    double best = 0.0, arg = 0.0;
    for (double x = 0.5; x < 4.5; x += 0.01) {
        const double v = p5(x).value;
        if (v > best) {
            best = v;
            arg = x;
        }
    }
    CHECK(std::abs(static_cast<double>(peak) - static_cast<double>(h.bin_of(arg))) <= 2.0);
}

TEST_CASE("eight steps: histogram close to the Rayleigh limit") {
    const WalkHistogram h = estimate_density(8, 100, 1000000, {8, 0});
    double sup = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        const double mid = 0.5 * (h.edges[i] + h.edges[i + 1]);
        sup = std::max(sup, std::abs(h.density(i) - rayleigh(8, mid)));
    }
    CHECK(sup < 0.02);
}

TEST_CASE("moment estimates") {
    const MomentValue m3 = estimate_moment(3, 2.0, 1000000, {3, 0});
    CHECK(m3.method == MomentMethod::monte_carlo);
    CHECK(std::abs(m3.value - 3.0) < 3.0 * m3.err);

    const MomentValue m4 = estimate_moment(4, -0.5, 1000000, {4, 0});
    CHECK(std::abs(m4.value - moment(4, -0.5).value) < 3.0 * m4.err);

    const MomentValue m41 = estimate_moment(4, 1.0, 1000000, {41, 0});
    CHECK(std::abs(m41.value - bessel_moment(4, 1.0).value) < 3.0 * m41.err);

    // Mean distance after five steps by quadrature of x p5(x).
    boost::math::quadrature::tanh_sinh<double> ts(8);
    const double cuts[] = {0.0, 1.0, 3.0, 5.0};
    double mean5 = 0.0;
    for (int i = 0; i < 3; ++i) mean5 += ts.integrate([](double x) { return x * p5(x).value; }, cuts[i], cuts[i + 1], 1e-9);
    const MomentValue m5 = estimate_moment(5, 1.0, 1000000, {5, 0});
    CHECK(std::abs(m5.value - mean5) < 3.0 * m5.err);

    CHECK_THROWS_AS(estimate_moment(3, -1.0, 1000, {}), DomainError);
    CHECK_THROWS_AS(estimate_moment(3, -1.5, 1000, {}), DomainError);
    CHECK_THROWS_AS(estimate_moment(3, 1.0, max_samples + 1, {}), GuardExceeded);
}

TEST_CASE("analytic and simulated moments agree for n <= 6") {
    for (int n = 1; n <= 6; ++n)
        for (double s : {0.5, 1.0, 2.0, 3.0}) {
            CAPTURE(n);
            CAPTURE(s);
            const MomentValue mc = estimate_moment(n, s, 1000000, {static_cast<std::uint64_t>(100 + n), 0});
            const MomentValue an = moment(n, s);
            CHECK(std::abs(mc.value - an.value) < 4.0 * mc.err + an.err + 1e-15);
        }
}
