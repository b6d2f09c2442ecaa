#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "walkdens/cli/cli.hpp"
#include "walkdens/errors.hpp"

namespace walkdens::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double d = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(d))
        throw InvalidParameter("config: " + key + " needs a number, got '" + v + "'");
    return d;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string csv_header(bool with_limit) { return with_limit ? "x_or_s,value,err,method,flags,limit" : "x_or_s,value,err,method,flags"; }

std::string to_csv(const OutputRecord& r, bool with_limit) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    std::string line = format_number(r.x_or_s) + "," + format_number(r.value) + "," + format_number(r.err) + "," +
                       csv_field(r.method) + "," + csv_field(flags);
    if (with_limit) line += "," + (r.limit ? format_number(*r.limit) : std::string());
    return line;
}

void apply_setting(Config& c, const std::string& key, const std::string& value) {
    const std::string k = trim(key), v = trim(value);
    if (k == "target_rel_error") {
        c.precision.target_rel_error = to_double(k, v);
    } else if (k == "max_terms") {
        const double d = to_double(k, v);
        if (d < 1 || d != std::floor(d)) throw InvalidParameter("config: max_terms must be a positive integer");
        c.precision.max_terms = static_cast<std::size_t>(d);
    } else if (k == "working_mode") {
        c.precision.working_mode = parse_working_mode(v);
    } else if (k == "p3_series_limit") {
        c.seams.p3_series_limit = to_double(k, v);
    } else if (k == "p4_series_limit") {
        c.seams.p4_series_limit = to_double(k, v);
    } else if (k == "p4_quad_halfwidth") {
        c.seams.p4_quad_halfwidth = to_double(k, v);
    } else if (k == "p4_edge_start") {
        c.seams.p4_edge_start = to_double(k, v);
    } else if (k == "p5_series_limit") {
        c.seams.p5_series_limit = to_double(k, v);
    } else {
        throw InvalidParameter("config: unknown key '" + k + "'");
    }
    c.precision.validate();
    c.seams.validate();
}

Config parse_config(std::istream& in, Config base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

}  // namespace walkdens::cli
