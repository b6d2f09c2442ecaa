#pragma once

#include <functional>
#include <vector>

#include "walkdens/numerics/precision.hpp"

namespace walkdens {

// J_order(scale * t)
struct BesselFactor {
    int order = 0;
    double scale = 1.0;
};

// coefficient * t^power_shift * prod_j J_{order_j}(scale_j t)
struct BesselProduct {
    double coefficient = 1.0;
    std::vector<BesselFactor> factors;
    int power_shift = 0;
};

// Integrand t^power * (sum_q log_poly[q] (log t)^q) * sum_i product_i(t) over (0, inf).
struct BesselIntegrand {
    double power = 0.0;
    std::vector<double> log_poly{1.0};
    std::vector<BesselProduct> products;
    // Optional replacement for the product sum on (0, series_radius), used where the products cancel.
    std::function<double(double)> series_head;
    double series_radius = 0.0;
};

struct BesselIntegral {
    double value = 0.0;
    double error = 0.0;
    // True when a non-oscillating tail component decays too slowly to be integrable.
    bool divergent = false;
};

// Finite part on [0, T] by Gauss-Kronrod panels (tanh-sinh near 0), tail on [T, inf) from the
// Hankel expansion of every factor with contour rotation for each oscillating frequency.
BesselIntegral integrate_bessel_product(const BesselIntegrand& integrand, const Precision& prec = {});

}  // namespace walkdens
