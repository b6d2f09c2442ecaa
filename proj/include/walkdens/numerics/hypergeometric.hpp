#pragma once

#include <vector>

#include "walkdens/numerics/double_double.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens {

struct HyperParams {
    std::vector<double> upper;
    std::vector<double> lower;

    // Throws DomainError when a lower parameter is zero or a negative integer.
    void validate() const;
    // sum(lower) - sum(upper); the series at z = 1 converges when p = q + 1 and this is > 0.
    double excess() const;
};

// pFq summed with term-ratio recurrence. At |z| = 1 the partial sums are Richardson-extrapolated.
Estimate hyp_pfq_estimate(const HyperParams& params, double z, const Precision& prec = {});
double hyp_pfq(const HyperParams& params, double z, const Precision& prec = {});

// Same series with double-double parameters and argument.
DoubleDouble hyp_pfq_dd(const std::vector<DoubleDouble>& upper, const std::vector<DoubleDouble>& lower,
                        DoubleDouble z, const Precision& prec = {}, double* error = nullptr);

// 2F1(a, b; a + b; z) for 0 <= z < 1, switching to the logarithmic expansion about z = 1.
double hyp2f1_zero_balanced(double a, double b, double z, const Precision& prec = {});

// Re 3F2(1/2,1/2,1/2; 5/6,7/6; z) for z > 1 via the logarithmic continuation.
Estimate hyp32_log_continuation(double z, const Precision& prec = {});

}  // namespace walkdens
