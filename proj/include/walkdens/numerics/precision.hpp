#pragma once

#include <cstddef>
#include <string>

namespace walkdens {

enum class WorkingMode { double_precision, double_double };

struct Precision {
    double target_rel_error = 1e-13;
    std::size_t max_terms = 100000;
    WorkingMode working_mode = WorkingMode::double_precision;

    // Throws InvalidParameter when a field is out of range.
    void validate() const;
};

// Value with an error estimate and the number of terms or nodes used.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
    std::size_t terms = 0;
};

WorkingMode parse_working_mode(const std::string& name);
std::string to_string(WorkingMode mode);

}  // namespace walkdens
