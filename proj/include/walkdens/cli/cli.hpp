#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "walkdens/densities/densities.hpp"
#include "walkdens/numerics/precision.hpp"

namespace walkdens::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

// One row of a density or moment table.
struct OutputRecord {
    double x_or_s = 0.0;
    double value = 0.0;
    double err = 0.0;
    std::string method;
    std::vector<std::string> flags;
    // Second value column, present only for density sweeps with the Rayleigh limit.
    std::optional<double> limit;
};

// Shortest round-trip decimal with '.' as separator; nan, inf and -inf spelled out.
std::string format_number(double v);
// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

// x_or_s,value,err,method,flags with flags joined by ';'; a trailing limit column when with_limit.
std::string csv_header(bool with_limit = false);
std::string to_csv(const OutputRecord& r, bool with_limit = false);

struct Config {
    Precision precision;
    DispatchSeams seams;
};

// Applies one key=value setting. Keys: target_rel_error, max_terms, working_mode and the fields of
// DispatchSeams. Throws InvalidParameter for unknown keys or malformed values.
void apply_setting(Config& c, const std::string& key, const std::string& value);
// key = value lines; blank lines and text after '#' are ignored.
Config parse_config(std::istream& in, Config base = {});

// Runs the command line and returns the exit code: 0 success, 1 verification failure, 2 usage error.
// The config file named by WALKDENS_CONFIG (or --config) is read first; flags override it.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace walkdens::cli
