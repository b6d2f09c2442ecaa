#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "walkdens/cli/cli.hpp"
#include "walkdens/errors.hpp"
#include "walkdens/moments/analytic.hpp"
#include "walkdens/moments/derivatives.hpp"
#include "walkdens/moments/exact.hpp"
#include "walkdens/oracle/oracle.hpp"
#include "walkdens/verify/verify.hpp"

namespace walkdens::cli {

namespace {

using nlohmann::json;

// Sweeps run grid points on several threads but store results by index, so output order is
// input order.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& f) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) f(i);
        });
    for (auto& th : pool) th.join();
}

// Error text that fits in a flag: no separators of the CSV or flag list.
std::string flag_text(const std::string& prefix, const std::string& msg) {
    std::string s = prefix + "=" + msg;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::replace(s.begin(), s.end(), ';', ' ');
    return s;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json record_json(const OutputRecord& r) {
    json j{{"x_or_s", number(r.x_or_s)},
           {"value", number(r.value)},
           {"err", number(r.err)},
           {"method", r.method},
           {"flags", r.flags}};
    if (r.limit) j["limit"] = number(*r.limit);
    return j;
}

void write_records(std::ostream& out, const std::string& format, const std::string& command,
                   const std::vector<OutputRecord>& records, bool with_limit, json meta) {
    if (format == "json") {
        meta["command"] = command;
        json rows = json::array();
        for (const auto& r : records) rows.push_back(record_json(r));
        meta["records"] = rows;
        out << meta.dump(2) << "\n";
        return;
    }
    out << csv_header(with_limit) << "\n";
    for (const auto& r : records) out << to_csv(r, with_limit) << "\n";
}

// Grid abscissas are printed and evaluated at 12 significant digits, so 0.05 * 7 is 0.35.
double clean(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

struct Usage : Error {
    using Error::Error;
};

// --- density -------------------------------------------------------------------------------

struct DensityArgs {
    int n = 0;
    double from = 0.0;
    // NaN means the support end n.
    double to = std::nan("");
    double step = 0.05;
    std::string method = "auto";
    bool rayleigh = false;
};

std::function<EvalResult(double)> density_route(int n, const std::string& method, const Precision& prec) {
    if (method == "auto") return [=](double x) { return density(n, x, prec); };
    if (method == "quadrature") return [=](double x) { return pn_quadrature(n, x, prec); };
    if (method == "convolution") {
        if (n < 3 || n > 6) throw Usage("density: convolution needs 3 <= n <= 6");
        return [=](double x) { return pn_convolution(n, x, prec); };
    }
    try {
        if (n == 3) {
            const P3Method m = parse_p3_method(method);
            return [=](double x) { return p3(x, m, prec); };
        }
        if (n == 4) {
            const P4Method m = parse_p4_method(method);
            return [=](double x) { return p4(x, m, prec); };
        }
        if (n == 5) {
            const P5Method m = parse_p5_method(method);
            return [=](double x) { return p5(x, m, prec); };
        }
    } catch (const InvalidParameter& e) {
        throw Usage(std::string("density: ") + e.what());
    }
    throw Usage("density: method '" + method + "' is not available for n = " + std::to_string(n));
}

std::vector<OutputRecord> density_sweep(const DensityArgs& a, const Precision& prec, int threads) {
    if (a.n < 2 || a.n > 12) throw Usage("density: n must lie in 2..12");
    const double to = std::isnan(a.to) ? a.n : a.to;
    if (!(a.step > 0.0) || !std::isfinite(a.step)) throw Usage("density: step must be positive");
    if (!std::isfinite(a.from) || !std::isfinite(to) || a.from < 0.0 || to < a.from)
        throw Usage("density: need 0 <= from <= to");
    const double count_d = std::floor((to - a.from) / a.step + 1e-9) + 1.0;
    if (count_d > 1e6) throw Usage("density: more than 1e6 grid points");
    const auto count = static_cast<std::size_t>(count_d);
    const auto route = density_route(a.n, a.method, prec);

    std::vector<OutputRecord> out(count);
    parallel_for(count, threads, [&](std::size_t i) {
        OutputRecord& r = out[i];
        r.x_or_s = clean(a.from + static_cast<double>(i) * a.step);
        if (a.rayleigh) r.limit = rayleigh(a.n, r.x_or_s);
        try {
            const EvalResult e = route(r.x_or_s);
            r.value = e.value;
            r.err = e.err;
            r.method = to_string(e.method);
            if (e.singular) r.flags.push_back("singular");
            if (e.region == "outside support") r.flags.push_back("outside_support");
            if (!std::isfinite(e.value)) r.flags.push_back("infinite");
        } catch (const std::exception& ex) {
            r.value = r.err = std::nan("");
            r.method = a.method;
            r.flags.push_back(flag_text("error", ex.what()));
        }
    });
    return out;
}

// --- moment --------------------------------------------------------------------------------

struct MomentArgs {
    int n = 0;
    std::vector<double> s;
    std::vector<std::string> methods{"auto"};
    long long samples = 1000000;
    std::uint64_t seed = 0;
};

const std::vector<std::string> moment_method_names{"auto",          "exact",       "exact_combinatorial",
                                                   "hyp_single",    "hyp_two_term", "bessel_integral",
                                                   "functional_eq", "convolution", "quadrature",
                                                   "quadrature_of_density", "monte_carlo"};

MomentValue moment_by(const MomentArgs& a, double s, const std::string& m, const Precision& prec) {
    const int n = a.n;
    if (m == "auto") return moment(n, s, prec);
    if (m == "exact" || m == "exact_combinatorial") {
        if (!(s >= 0.0 && std::fmod(s, 2.0) == 0.0 && s <= 400.0))
            throw DomainError("exact: s must be an even integer in [0, 400]");
        const int k = static_cast<int>(s / 2.0);
        return {even_moment_sequence(n, k)[k].get_d(), 0.0, MomentMethod::exact_combinatorial};
    }
    if (m == "hyp_single") {
        if (n != 3) throw MethodUnavailable("hyp_single: n = 3 only");
        return w3(s, prec);
    }
    if (m == "hyp_two_term") {
        if (n == 3) return w3_two_term(s, prec);
        if (n == 4) return w4_two_term(s, prec);
        throw MethodUnavailable("hyp_two_term: n in {3, 4} only");
    }
    if (m == "bessel_integral") {
        if (n == 3 || n == 4) return bessel_moment(n, s, prec);
        const BesselFormValue b = bessel_form_moment(n, s, 0, prec);
        return {b.value, b.err, MomentMethod::bessel_integral};
    }
    if (m == "functional_eq") return continue_by_functional_eq(n, s, prec);
    if (m == "convolution") {
        if (n != 4) throw MethodUnavailable("convolution: n = 4 only");
        return convolution_w4_from_w3(s, 40, prec);
    }
    if (m == "quadrature" || m == "quadrature_of_density") return density_moment(n, s, prec);
    if (m == "monte_carlo") return estimate_moment(n, s, a.samples, {a.seed, 0});
    throw Usage("moment: unknown method '" + m + "'");
}

// Distance from s to the nearest pole of W_n, infinite when there is none.
double pole_distance(int n, double s) {
    if (n == 1 || s >= (n == 2 ? -1.0 : -2.0) + 0.5) return HUGE_VAL;
    if (n == 2) {
        const double k = std::max(0.0, std::round((-s - 1.0) / 2.0));
        return std::abs(s + 2.0 * k + 1.0);
    }
    const double k = std::max(1.0, std::round(-s / 2.0));
    return std::abs(s + 2.0 * k);
}

constexpr double near_pole_width = 0.05;

std::vector<OutputRecord> moment_sweep(const MomentArgs& a, const Precision& prec, int threads) {
    if (a.n < 1 || a.n > 12) throw Usage("moment: n must lie in 1..12");
    if (a.s.empty()) throw Usage("moment: --s needs at least one value");
    for (double s : a.s)
        if (!std::isfinite(s)) throw Usage("moment: s values must be finite");
    for (const auto& m : a.methods)
        if (std::find(moment_method_names.begin(), moment_method_names.end(), m) == moment_method_names.end())
            throw Usage("moment: unknown method '" + m + "'");
    if (a.samples < 2 || a.samples > max_samples) throw Usage("moment: samples must lie in 2..1e9");

    const std::size_t nm = a.methods.size();
    std::vector<OutputRecord> out(a.s.size() * nm);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const double s = a.s[i / nm];
        const std::string& m = a.methods[i % nm];
        OutputRecord& r = out[i];
        r.x_or_s = s;
        r.method = m;
        if (is_moment_pole(a.n, s)) {
            r.value = r.err = std::nan("");
            r.flags.push_back("pole");
            return;
        }
        if (pole_distance(a.n, s) < near_pole_width) r.flags.push_back("near_pole");
        try {
            const MomentValue v = moment_by(a, s, m, prec);
            r.value = v.value;
            r.err = v.err;
            r.method = to_string(v.method);
        } catch (const std::exception& e) {
            r.value = r.err = std::nan("");
            r.flags.push_back(flag_text("error", e.what()));
        }
    });

    // Largest spread between methods at one s, with the reported errors of the two extremes.
    std::optional<OutputRecord> summary;
    for (std::size_t j = 0; j < a.s.size(); ++j) {
        const OutputRecord *lo = nullptr, *hi = nullptr;
        int finite = 0;
        for (std::size_t k = 0; k < nm; ++k) {
            const OutputRecord& r = out[j * nm + k];
            if (!std::isfinite(r.value)) continue;
            ++finite;
            if (!lo || r.value < lo->value) lo = &r;
            if (!hi || r.value > hi->value) hi = &r;
        }
        if (finite < 2) continue;
        const double spread = hi->value - lo->value;
        if (!summary || spread > summary->value) {
            summary = OutputRecord{a.s[j], spread, hi->err + lo->err, "max_discrepancy", {"summary"}, std::nullopt};
            summary->flags.push_back(spread <= summary->err ? "within_err" : "exceeds_err");
        }
    }
    if (summary) out.push_back(*summary);
    return out;
}

// --- verify --------------------------------------------------------------------------------

json check_json(const CheckResult& c) {
    return json{{"criterion", c.criterion}, {"suite", to_string(c.suite)}, {"name", c.name},
                {"target", c.target},       {"residual", number(c.residual)}, {"pass", c.pass},
                {"status", c.status},       {"detail", c.detail},          {"seconds", c.seconds}};
}

json report_json(const VerifyReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    return json{{"command", "verify"}, {"suite", to_string(r.suite)}, {"level", to_string(r.level)},
                {"seconds", r.seconds}, {"pass", r.all_pass()},      {"failures", r.failures()},
                {"checks", checks}};
}

std::string check_line(const CheckResult& c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-4s  %2d  %-12s  ", c.pass ? "PASS" : "FAIL", c.criterion, to_string(c.suite).c_str());
    std::string line = buf + c.name + "  [" + c.target + "]  residual " + format_number(c.residual);
    if (!c.status.empty()) line += "  " + c.status;
    if (!c.detail.empty()) line += "  (" + c.detail + ")";
    return line;
}

int run_verify_command(Suite suite, Level level, const std::string& format, const std::string& json_path,
                       std::ostream& out) {
    const bool text = format == "text";
    if (text) out << "verify " << to_string(suite) << " (" << to_string(level) << ")\n";
    const VerifyReport report = run_verify(suite, level, [&](const CheckResult& c) {
        if (text) out << check_line(c) << std::endl;
    });
    if (text) {
        out << report.checks.size() << " checks, " << report.failures() << " failed, " << format_number(report.seconds)
            << " s\n";
    } else if (format == "json") {
        out << report_json(report).dump(2) << "\n";
    } else {
        out << "criterion,suite,name,target,residual,pass,status,seconds,detail\n";
        for (const auto& c : report.checks)
            out << c.criterion << "," << to_string(c.suite) << "," << csv_field(c.name) << "," << csv_field(c.target)
                << "," << format_number(c.residual) << "," << (c.pass ? "true" : "false") << "," << csv_field(c.status)
                << "," << format_number(c.seconds) << "," << csv_field(c.detail) << "\n";
    }
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw Usage("verify: cannot write " + json_path);
        f << report_json(report).dump(2) << "\n";
    }
    return report.all_pass() ? exit_ok : exit_failure;
}

// --- sample --------------------------------------------------------------------------------

struct SampleArgs {
    int n = 0;
    long long samples = 1000000;
    int bins = default_bins;
    std::uint64_t seed = 0;
    int streams = 1;
};

WalkHistogram sample_histogram(const SampleArgs& a, int threads) {
    if (a.n < 1 || a.n > 1000) throw Usage("sample: n must lie in 1..1000");
    if (a.samples > max_samples) throw GuardExceeded("sample: at most 1e9 samples");
    if (a.streams < 1 || a.samples / a.streams < 10000) throw Usage("sample: each stream needs at least 1e4 samples");
    if (a.bins < 10) throw Usage("sample: at least 10 bins");
    // The split into streams is fixed by --streams alone, so the thread count never changes output.
    std::vector<WalkHistogram> parts(static_cast<std::size_t>(a.streams));
    parallel_for(parts.size(), threads, [&](std::size_t i) {
        const long long share = a.samples / a.streams + (static_cast<long long>(i) < a.samples % a.streams ? 1 : 0);
        parts[i] = estimate_density(a.n, a.bins, share, {a.seed, static_cast<std::uint64_t>(i)});
    });
    WalkHistogram h = empty_histogram(a.n, a.bins);
    for (const auto& p : parts) h.merge(p);
    return h;
}

void write_histogram(std::ostream& out, const std::string& format, const WalkHistogram& h, const SampleArgs& a) {
    if (format != "json") {
        out << h.to_csv();
        return;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < h.bins(); ++i)
        rows.push_back(json{{"left", h.edges[i]},
                            {"right", h.edges[i + 1]},
                            {"count", h.counts[i]},
                            {"density", h.density(i)},
                            {"stderr", h.density_stderr(i)}});
    out << json{{"command", "sample"}, {"n", h.n}, {"samples", h.samples}, {"seed", a.seed},
                {"streams", a.streams}, {"bins", rows}}
               .dump(2)
        << "\n";
}

// Restores the process-wide seams when a run ends, so repeated runs in one process start clean.
struct SeamGuard {
    DispatchSeams saved = dispatch_seams();
    ~SeamGuard() { set_dispatch_seams(saved); }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Densities and moments of uniform random walks in the plane"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> settings;
    int threads = 1;
    app.add_option("--config", config_path, "key=value config file (default: $WALKDENS_CONFIG)");
    app.add_option("--set", settings, "Override one config key, as key=value")->take_all();
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1, 256));

    std::string format = "csv";
    const auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember(allowed));
    };

    DensityArgs da;
    auto* dens = app.add_subcommand("density", "Tabulate p_n(x) on a grid");
    dens->add_option("--n", da.n, "Number of steps, 2..12")->required();
    dens->add_option("--from", da.from, "First abscissa");
    dens->add_option("--to", da.to, "Last abscissa (default n)");
    dens->add_option("--step", da.step, "Grid spacing");
    dens->add_option("--method", da.method, "auto, quadrature, convolution or a route of p3, p4, p5");
    dens->add_flag("--rayleigh", da.rayleigh, "Add the large-n Rayleigh limit as a column");
    add_format(dens, {"csv", "json"});

    MomentArgs ma;
    auto* mom = app.add_subcommand("moment", "Evaluate W_n(s) by one or more methods");
    mom->add_option("--n", ma.n, "Number of steps")->required();
    mom->add_option("--s", ma.s, "Comma-separated exponents")->required()->delimiter(',');
    mom->add_option("--method", ma.methods, "Comma-separated methods")->delimiter(',');
    mom->add_option("--samples", ma.samples, "Samples for monte_carlo");
    mom->add_option("--seed", ma.seed, "Seed for monte_carlo");
    add_format(mom, {"csv", "json"});

    std::string suite = "all", level = "quick", json_path;
    auto* ver = app.add_subcommand("verify", "Run the verification suites");
    ver->add_option("--suite", suite, "closed_forms, odes, appendix, mahler, montecarlo or all")
        ->check(CLI::IsMember({"closed_forms", "odes", "appendix", "mahler", "montecarlo", "all"}));
    ver->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    ver->add_option("--json", json_path, "Also write the JSON report to this file");
    add_format(ver, {"text", "csv", "json"});

    SampleArgs sa;
    auto* smp = app.add_subcommand("sample", "Monte Carlo histogram of the distance after n steps");
    smp->add_option("--n", sa.n, "Number of steps")->required();
    smp->add_option("--samples", sa.samples, "Number of walks (at most 1e9)");
    smp->add_option("--bins", sa.bins, "Histogram bins");
    smp->add_option("--seed", sa.seed, "Seed");
    smp->add_option("--streams", sa.streams, "Independent generator streams; fixes the output with the seed");
    add_format(smp, {"csv", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }
    if (ver->parsed() && !ver->count("--format")) format = "text";

    SeamGuard guard;
    try {
        Config config;
        if (config_path.empty())
            if (const char* env = std::getenv("WALKDENS_CONFIG")) config_path = env;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw Usage("cannot read config file " + config_path);
            config = parse_config(f, config);
        }
        for (const auto& kv : settings) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Usage("--set expects key=value, got '" + kv + "'");
            apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        set_dispatch_seams(config.seams);

        if (dens->parsed()) {
            const auto rows = density_sweep(da, config.precision, threads);
            write_records(out, format, "density", rows, da.rayleigh, json{{"n", da.n}});
        } else if (mom->parsed()) {
            const auto rows = moment_sweep(ma, config.precision, threads);
            write_records(out, format, "moment", rows, false, json{{"n", ma.n}});
        } else if (ver->parsed()) {
            return run_verify_command(parse_suite(suite), parse_level(level), format, json_path, out);
        } else if (smp->parsed()) {
            write_histogram(out, format, sample_histogram(sa, threads), sa);
        }
    } catch (const Usage& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_ok;
}

}  // namespace walkdens::cli
