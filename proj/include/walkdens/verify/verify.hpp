#pragma once

#include <functional>
#include <string>
#include <vector>

namespace walkdens {

enum class Suite { closed_forms, odes, appendix, mahler, montecarlo, all };
enum class Level { quick, full };

std::string to_string(Suite s);
std::string to_string(Level l);
Suite parse_suite(const std::string& name);
Level parse_level(const std::string& name);

inline constexpr int acceptance_criteria = 12;

struct CheckResult {
    std::string name;
    // Numbered acceptance item the check belongs to; 0 for supporting checks.
    int criterion = 0;
    Suite suite = Suite::all;
    // Requirement in words, e.g. "<= 1e-09" or "exact".
    std::string target;
    // Achieved residual. Exact checks report the number of failing cases.
    double residual = 0.0;
    bool pass = false;
    // Extra qualifier such as CONJECTURAL-CONFIRMED-NUMERICALLY.
    std::string status;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    Suite suite = Suite::all;
    Level level = Level::quick;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool all_pass() const;
    int failures() const;
};

// Runs every check of the suite. A check that throws is recorded as failed with the message in
// detail. on_check is called after each check, in order.
VerifyReport run_verify(Suite suite, Level level, const std::function<void(const CheckResult&)>& on_check = {});

}  // namespace walkdens
