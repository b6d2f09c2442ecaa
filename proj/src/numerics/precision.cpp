#include "walkdens/numerics/precision.hpp"

#include <cmath>

#include "walkdens/errors.hpp"

namespace walkdens {

void Precision::validate() const {
    if (!(target_rel_error > 0.0) || !std::isfinite(target_rel_error))
        throw InvalidParameter("target_rel_error must be positive and finite");
    if (max_terms < 1) throw InvalidParameter("max_terms must be at least 1");
}

WorkingMode parse_working_mode(const std::string& name) {
    if (name == "double") return WorkingMode::double_precision;
    if (name == "double_double") return WorkingMode::double_double;
    throw InvalidParameter("unknown working mode: " + name);
}

std::string to_string(WorkingMode mode) {
    return mode == WorkingMode::double_double ? "double_double" : "double";
}

}  // namespace walkdens
