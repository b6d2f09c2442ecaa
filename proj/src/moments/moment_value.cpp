#include "walkdens/moments/moment_value.hpp"

#include <array>
#include <utility>

#include "walkdens/errors.hpp"

namespace walkdens {

namespace {

constexpr std::array<std::pair<MomentMethod, const char*>, 12> names{{
    {MomentMethod::exact_combinatorial, "exact_combinatorial"},
    {MomentMethod::recurrence, "recurrence"},
    {MomentMethod::hyp_single, "hyp_single"},
    {MomentMethod::hyp_two_term, "hyp_two_term"},
    {MomentMethod::bessel_integral, "bessel_integral"},
    {MomentMethod::functional_eq, "functional_eq"},
    {MomentMethod::convolution, "convolution"},
    {MomentMethod::quadrature_of_density, "quadrature_of_density"},
    {MomentMethod::monte_carlo, "monte_carlo"},
    {MomentMethod::closed_form, "closed_form"},
    {MomentMethod::series, "series"},
    {MomentMethod::finite_difference, "finite_difference"},
}};

}  // namespace

std::string to_string(MomentMethod m) {
    for (const auto& [k, v] : names)
        if (k == m) return v;
    return "unknown";
}

MomentMethod parse_moment_method(const std::string& name) {
    for (const auto& [k, v] : names)
        if (name == v) return k;
    throw InvalidParameter("unknown moment method: " + name);
}

}  // namespace walkdens
