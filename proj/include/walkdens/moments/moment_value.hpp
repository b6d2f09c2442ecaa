#pragma once

#include <string>

namespace walkdens {

// Which representation produced a moment value.
enum class MomentMethod {
    exact_combinatorial,
    recurrence,
    hyp_single,
    hyp_two_term,
    bessel_integral,
    functional_eq,
    convolution,
    quadrature_of_density,
    monte_carlo,
    closed_form,
    series,
    finite_difference,
};

struct MomentValue {
    double value = 0.0;
    // Heuristic error bound, >= 0.
    double err = 0.0;
    MomentMethod method = MomentMethod::closed_form;
};

std::string to_string(MomentMethod m);
MomentMethod parse_moment_method(const std::string& name);

}  // namespace walkdens
