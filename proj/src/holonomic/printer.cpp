#include <algorithm>
#include <sstream>

#include "walkdens/holonomic/operators.hpp"

namespace walkdens {

namespace {

// Root search is skipped for coefficients beyond this size; the factor is then printed expanded.
const Integer divisor_limit = Integer(1000000000);

std::vector<Integer> divisors(const Integer& v) {
    Integer a = abs(v);
    std::vector<Integer> d;
    for (Integer i = 1; i * i <= a; ++i) {
        if (a % i != 0) continue;
        d.push_back(i);
        if (i * i != a) d.push_back(a / i);
    }
    return d;
}

std::string power_text(const std::string& base, int e) {
    if (e == 1) return base;
    return base + "^" + std::to_string(e);
}

// Expanded polynomial, e.g. "7 x^4 - 32 x^2 + 64".
std::string expanded(const Poly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& c = p.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        const Rational a = abs(c[i]);
        if (first)
            os << (c[i] < 0 ? "-" : "");
        else
            os << (c[i] < 0 ? " - " : " + ");
        first = false;
        if (i == 0) {
            os << a.get_str();
            continue;
        }
        if (a != 1) os << a.get_str() << " ";
        os << power_text(var, static_cast<int>(i));
    }
    return os.str();
}

struct Factored {
    Rational scalar = 1;
    int zero_mult = 0;
    // (b, a, multiplicity) for the factor (b var - a), sorted by root a/b descending.
    struct Linear {
        Integer b, a;
        int mult;
    };
    std::vector<Linear> linear;
    // Factors b t^2 - a, same layout.
    std::vector<Linear> quadratic;
    Poly rest{1};
};

// Removes every primitive factor (b t - a) of q, with multiplicity.
std::vector<Factored::Linear> extract_linear(Poly& q) {
    std::vector<Factored::Linear> found;
    if (q.degree() < 1 || abs(q.coeff(0).get_num()) > divisor_limit || abs(q.leading().get_num()) > divisor_limit)
        return found;
    const std::vector<Integer> bs = divisors(q.leading().get_num()), as = divisors(q.coeff(0).get_num());
    for (const Integer& b : bs)
        for (const Integer& a0 : as)
            for (int sgn : {1, -1}) {
                const Integer a = a0 * sgn;
                if (gcd(a, b) != 1) continue;
                const Poly lf(std::vector<Rational>{Rational(-a), Rational(b)});
                int m = 0;
                while (q.degree() >= 1) {
                    auto [quo, rem] = q.divmod(lf);
                    if (!rem.is_zero()) break;
                    q = quo;
                    ++m;
                }
                if (m > 0) found.push_back({b, a, m});
            }
    std::sort(found.begin(), found.end(),
              [](const auto& l, const auto& r) { return Rational(l.a, l.b) > Rational(r.a, r.b); });
    return found;
}

Factored factor(const Poly& p) {
    Factored f;
    Poly q = p.primitive();
    f.scalar = p.leading() / q.leading();
    while (!q.is_zero() && q.coeff(0) == 0) {
        q = Poly(std::vector<Rational>(q.coeffs().begin() + 1, q.coeffs().end()));
        ++f.zero_mult;
    }
    f.linear = extract_linear(q);
    // An even remainder may still split into factors b t^2 - a, as x^4 - 64 = (x^2 - 8)(x^2 + 8).
    bool even = q.degree() >= 2;
    for (int i = 1; i <= q.degree(); i += 2) even = even && q.coeff(i) == 0;
    if (even) {
        std::vector<Rational> half;
        for (int i = 0; i <= q.degree(); i += 2) half.push_back(q.coeff(i));
        Poly h(std::move(half));
        f.quadratic = extract_linear(h);
        std::vector<Rational> back(static_cast<std::size_t>(2 * h.degree() + 1), Rational(0));
        for (int i = 0; i <= h.degree(); ++i) back[2 * i] = h.coeff(i);
        q = Poly(std::move(back));
    }
    // Dividing by primitive factors keeps q primitive with positive leading coefficient.
    f.rest = q;
    return f;
}

// Returns the factored text without sign, and whether the polynomial is negative overall.
std::pair<std::string, bool> factored_parts(const Poly& p, const std::string& var, const std::string& extra) {
    const Factored f = factor(p);
    std::vector<std::string> parts;
    const bool negative = f.scalar < 0;
    const Rational mag = abs(f.scalar);
    const bool rest_trivial = f.rest == Poly(1);
    const bool bare =
        f.zero_mult == 0 && f.linear.empty() && f.quadratic.empty() && rest_trivial && extra.empty();
    if (mag != 1 || bare) parts.push_back(mag.get_str());
    if (!extra.empty()) parts.push_back(extra);
    auto token = [](const Factored::Linear& l, const std::string& v) {
        std::string lt = l.b == 1 ? v : l.b.get_str() + " " + v;
        lt += (l.a > 0 ? " - " : " + ") + Integer(abs(l.a)).get_str();
        return power_text("(" + lt + ")", l.mult);
    };
    std::vector<std::string> roots_above, roots_below;
    for (const auto& l : f.linear) (l.a > 0 ? roots_above : roots_below).push_back(token(l, var));
    for (auto& s : roots_above) parts.push_back(s);
    if (f.zero_mult > 0) parts.push_back(power_text(var, f.zero_mult));
    for (auto& s : roots_below) parts.push_back(s);
    for (const auto& l : f.quadratic) parts.push_back(token(l, var + "^2"));
    if (!rest_trivial) parts.push_back("(" + expanded(f.rest, var) + ")");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
    return {out, negative};
}

void append_line(std::ostringstream& os, bool& first, const std::pair<std::string, bool>& part) {
    if (first)
        os << (part.second ? "- " : "");
    else
        os << "\n" << (part.second ? "- " : "+ ");
    os << part.first;
    first = false;
}

}  // namespace

std::string format_factored(const Poly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    auto [text, negative] = factored_parts(p, var, "");
    return (negative ? "-" : "") + text;
}

std::string format_theta(const ThetaOperator& op, const std::string& var) {
    if (op.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& terms = op.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const std::string xp = it->x_power == 0 ? "" : power_text(var, it->x_power);
        append_line(os, first, factored_parts(it->theta, "theta", xp));
    }
    return os.str();
}

std::string format_dx(const DxOperator& op, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (int i = op.order(); i >= 0; --i) {
        if (op.c[i].is_zero()) continue;
        auto part = factored_parts(op.c[i], var, "");
        if (i > 0) part.first += " " + power_text("D", i);
        append_line(os, first, part);
    }
    if (first) return "0";
    return os.str();
}

}  // namespace walkdens
