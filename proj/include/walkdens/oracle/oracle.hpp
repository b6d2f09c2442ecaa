#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "walkdens/moments/moment_value.hpp"

namespace walkdens {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Counter-based generator: draw i of (seed, stream) is a fixed hash of the triple, so every
// platform reproduces the same sequence and streams are independent by construction.
class CounterRng {
public:
    explicit CounterRng(const RngSpec& spec);
    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double next_unit();
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline constexpr long long max_samples = 1000000000LL;

// |sum_k exp(2 pi i t_k)| for n independent uniform t_k.
double sample_distance(int n, CounterRng& rng);

struct WalkHistogram {
    int n = 0;
    std::vector<double> edges;
    std::vector<long long> counts;
    long long samples = 0;

    std::size_t bins() const { return counts.size(); }
    double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
    // counts / (samples * width), integrating to 1 over [0, n].
    double density(std::size_t i) const;
    // Binomial standard error of density(i).
    double density_stderr(std::size_t i) const;
    // Bin of a distance; the right end n belongs to the last bin.
    std::size_t bin_of(double r) const;
    // Adds another histogram with identical edges.
    void merge(const WalkHistogram& o);
    // Columns: left,right,count,density,stderr.
    std::string to_csv() const;
};

inline constexpr int default_bins = 100;

// samples draws from stream rng.stream of rng.seed. Requires bins >= 10 and samples >= 1e4.
WalkHistogram estimate_density(int n, int bins, long long samples, const RngSpec& rng);
// Empty histogram with uniform edges on [0, n], for merging partial runs.
WalkHistogram empty_histogram(int n, int bins);

// Sample mean of r^s with its standard error. DomainError for s <= -1.
MomentValue estimate_moment(int n, double s, long long samples, const RngSpec& rng);

// Probability mass of each histogram bin under a density, integrated with the given interior
// breakpoints (singular abscissas) respected.
std::vector<double> bin_probabilities(const WalkHistogram& h, const std::function<double(double)>& density,
                                      const std::vector<double>& breakpoints = {});

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    // Bins whose expected count fell below the pooling threshold were merged into neighbours.
    int pooled_bins = 0;
};

// Pearson test of the counts against expected bin probabilities. Adjacent bins are pooled until
// each expected count is at least 5.
ChiSquare chi_square_test(const WalkHistogram& h, const std::vector<double>& probabilities);

}  // namespace walkdens
