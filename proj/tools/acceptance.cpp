// Runs `walkdens verify --suite all --level quick` and prints one PASS/FAIL line per acceptance criterion.
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#ifndef WALKDENS_TOOL_PATH
#error "WALKDENS_TOOL_PATH must name the walkdens executable"
#endif

namespace {

constexpr double wall_limit_seconds = 600.0;

const std::array<const char*, 12> titles = {
    "exact even moments annihilated by the moment operators, n <= 8",
    "characteristic polynomials factor over squares, n <= 200",
    "gap-sequence identities hold exactly",
    "Mellin translation reproduces the n = 4 and n = 5 operators",
    "p3 representations agree",
    "p4 closed form against quadrature and special values",
    "p4 edge expansion and derivative singularities",
    "p5 residues and series coefficients",
    "derivatives at zero and Mahler measures",
    "Bessel moments, reflection and convolution",
    "modularity of p4",
    "Monte Carlo moments and histograms, full quick run",
};

struct Tally {
    int checks = 0;
    int failed = 0;
    double seconds = 0.0;
    std::string first_failure;
};

}  // namespace

int main() {
    namespace fs = std::filesystem;
    const fs::path report = fs::temp_directory_path() / ("walkdens_acceptance_" + std::to_string(::getpid()) + ".json");
    const std::string cmd = std::string("\"") + WALKDENS_TOOL_PATH + "\" verify --suite all --level quick --json \"" +
                            report.string() + "\" > /dev/null";

    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    std::array<Tally, titles.size() + 1> tally{};
    bool parsed = false;
    if (std::ifstream in(report); in) {
        try {
            const auto doc = nlohmann::json::parse(in);
            for (const auto& c : doc.at("checks")) {
                const int k = c.at("criterion").get<int>();
                if (k < 1 || k > static_cast<int>(titles.size())) continue;
                auto& t = tally[k];
                ++t.checks;
                t.seconds += c.at("seconds").get<double>();
                if (!c.at("pass").get<bool>()) {
                    if (t.failed++ == 0) t.first_failure = c.at("name").get<std::string>();
                }
            }
            parsed = true;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "unreadable report: %s\n", e.what());
        }
    }
    std::error_code ec;
    fs::remove(report, ec);

    int failures = 0;
    for (std::size_t k = 1; k <= titles.size(); ++k) {
        const auto& t = tally[k];
        bool pass = parsed && t.checks > 0 && t.failed == 0;
        std::string note = std::to_string(t.checks - t.failed) + "/" + std::to_string(t.checks) + " checks";
        if (t.failed > 0) note += ", first failure: " + t.first_failure;
        if (t.checks == 0) note = "no checks reported";
        if (k == titles.size()) {
            // The last criterion also covers the whole quick run.
            pass = pass && exit_code == 0 && wall < wall_limit_seconds;
            char buf[96];
            std::snprintf(buf, sizeof buf, ", exit %d, %.1f s total", exit_code, wall);
            note += buf;
        }
        std::printf("%s  %2zu  %s (%s)\n", pass ? "PASS" : "FAIL", k, titles[k - 1], note.c_str());
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
