#include "walkdens/oracle/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "walkdens/errors.hpp"

namespace walkdens {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void check_n(int n) {
    if (n < 1) throw DomainError("oracle: n must be at least 1");
}

void check_samples(long long samples) {
    if (samples > max_samples) throw GuardExceeded("oracle: at most 1e9 samples");
}

}  // namespace

CounterRng::CounterRng(const RngSpec& spec)
    : key_(splitmix64(spec.seed ^ splitmix64(spec.stream ^ 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }

double CounterRng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double sample_distance(int n, CounterRng& rng) {
    check_n(n);
    double x = 0.0, y = 0.0;
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * rng.next_unit();
        x += std::cos(a);
        y += std::sin(a);
    }
    // One step has length exactly 1; rounding in cos^2 + sin^2 must not move it.
    if (n == 1) return 1.0;
    return std::min(std::hypot(x, y), static_cast<double>(n));
}

double WalkHistogram::density(std::size_t i) const {
    if (samples == 0) return 0.0;
    return static_cast<double>(counts[i]) / (static_cast<double>(samples) * width(i));
}

double WalkHistogram::density_stderr(std::size_t i) const {
    if (samples == 0) return 0.0;
    const double p = static_cast<double>(counts[i]) / static_cast<double>(samples);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) / width(i);
}

std::size_t WalkHistogram::bin_of(double r) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), r);
    if (it == edges.begin()) return 0;
    const std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
    return std::min(i, counts.size() - 1);
}

void WalkHistogram::merge(const WalkHistogram& o) {
    if (o.n != n || o.edges != edges) throw InvalidParameter("WalkHistogram::merge: edges differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    samples += o.samples;
}

std::string WalkHistogram::to_csv() const {
    // Shortest round-trip decimals, independent of the stream locale.
    auto num = [](double v) {
        char buf[32];
        return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
    };
    std::string out = "left,right,count,density,stderr\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        out += num(edges[i]) + "," + num(edges[i + 1]) + "," + std::to_string(counts[i]) + "," + num(density(i)) + "," +
               num(density_stderr(i)) + "\n";
    return out;
}

WalkHistogram empty_histogram(int n, int bins) {
    check_n(n);
    if (bins < 1) throw DomainError("empty_histogram: bins must be positive");
    WalkHistogram h;
    h.n = n;
    h.counts.assign(bins, 0);
    for (int i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(n) * i / bins);
    return h;
}

WalkHistogram estimate_density(int n, int bins, long long samples, const RngSpec& rng) {
    if (bins < 10) throw DomainError("estimate_density: at least 10 bins");
    if (samples < 10000) throw DomainError("estimate_density: at least 1e4 samples");
    check_samples(samples);
    WalkHistogram h = empty_histogram(n, bins);
    CounterRng g(rng);
    for (long long i = 0; i < samples; ++i) ++h.counts[h.bin_of(sample_distance(n, g))];
    h.samples = samples;
    return h;
}

MomentValue estimate_moment(int n, double s, long long samples, const RngSpec& rng) {
    check_n(n);
    if (!(s > -1.0)) throw DomainError("estimate_moment: s must exceed -1");
    if (samples < 2) throw DomainError("estimate_moment: at least 2 samples");
    check_samples(samples);
    CounterRng g(rng);
    // Welford's update keeps the variance accurate for large sample counts.
    double mean = 0.0, m2 = 0.0;
    for (long long i = 0; i < samples; ++i) {
        const double v = std::pow(sample_distance(n, g), s);
        const double d = v - mean;
        mean += d / static_cast<double>(i + 1);
        m2 += d * (v - mean);
    }
    MomentValue r;
    r.value = mean;
    r.err = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
    r.method = MomentMethod::monte_carlo;
    return r;
}

std::vector<double> bin_probabilities(const WalkHistogram& h, const std::function<double(double)>& density,
                                      const std::vector<double>& breakpoints) {
    boost::math::quadrature::tanh_sinh<double> ts(10);
    std::vector<double> out;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        std::vector<double> cuts{h.edges[i], h.edges[i + 1]};
        for (double b : breakpoints)
            if (b > cuts.front() && b < cuts.back()) cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        double mass = 0.0;
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            auto f = [&](double x) {
                const double v = density(x);
                return std::isfinite(v) ? v : 0.0;
            };
            mass += ts.integrate(f, cuts[j], cuts[j + 1], 1e-10);
        }
        out.push_back(mass);
    }
    return out;
}

ChiSquare chi_square_test(const WalkHistogram& h, const std::vector<double>& probabilities) {
    if (probabilities.size() != h.bins()) throw InvalidParameter("chi_square_test: one probability per bin");
    const double N = static_cast<double>(h.samples);
    ChiSquare c;
    std::vector<std::pair<double, double>> groups;  // (observed, expected)
    double obs = 0.0, expct = 0.0;
    for (std::size_t i = 0; i < h.bins(); ++i) {
        obs += static_cast<double>(h.counts[i]);
        expct += N * probabilities[i];
        if (expct >= 5.0) {
            groups.emplace_back(obs, expct);
            obs = expct = 0.0;
        } else {
            ++c.pooled_bins;
        }
    }
    // A short tail joins the last complete group.
    if (obs > 0.0 || expct > 0.0) {
        if (groups.empty())
            groups.emplace_back(obs, expct);
        else {
            groups.back().first += obs;
            groups.back().second += expct;
        }
    }
    for (const auto& [o, e] : groups)
        c.statistic += e > 0.0 ? (o - e) * (o - e) / e : (o > 0.0 ? HUGE_VAL : 0.0);
    c.dof = std::max(static_cast<int>(groups.size()) - 1, 1);
    const boost::math::chi_squared_distribution<double> dist(c.dof);
    c.p_value = std::isfinite(c.statistic) ? boost::math::cdf(boost::math::complement(dist, c.statistic)) : 0.0;
    return c;
}

}  // namespace walkdens
