#include "walkdens/holonomic/appendix.hpp"

#include <mutex>
#include <sstream>

#include "walkdens/errors.hpp"
#include "walkdens/moments/exact.hpp"

namespace walkdens {

namespace {

// e_j of the given values, j = 0..J.
std::vector<Integer> elementary_symmetric(const std::vector<Integer>& v, int J) {
    std::vector<Integer> e(J + 1, 0);
    e[0] = 1;
    for (const Integer& x : v)
        for (int j = J; j >= 1; --j) e[j] += x * e[j - 1];
    return e;
}

// T[a][k]: gap-2 k-subsets of {1..a} weighted by prod j (X - j); F_{M,k} = T[M-1][k].
const std::vector<std::vector<Poly>>& fmk_table() {
    static std::once_flag once;
    static std::vector<std::vector<Poly>> t;
    std::call_once(once, [] {
        const int A = fmk_max_m, Kmax = fmk_max_m / 2 + 1;
        t.assign(A + 1, std::vector<Poly>(Kmax + 1, Poly()));
        for (int a = 0; a <= A; ++a) t[a][0] = Poly(1);
        for (int a = 1; a <= A; ++a) {
            const Poly w(std::vector<Rational>{Rational(-a * a), Rational(a)});
            for (int k = 1; k <= Kmax; ++k) {
                t[a][k] = t[a - 1][k];
                if (a >= 2)
                    t[a][k] += w * t[a - 2][k - 1];
                else if (k == 1)
                    t[a][k] += w;
            }
        }
    });
    return t;
}

// Phi(X0, u) as a polynomial in u.
Poly at_x(const BiPoly& p, const Rational& x0) {
    std::vector<Rational> c;
    for (const auto& [key, v] : p.terms()) {
        Rational t = v;
        for (int i = 0; i < key.first; ++i) t *= x0;
        if (static_cast<int>(c.size()) <= key.second) c.resize(key.second + 1, Rational(0));
        c[key.second] += t;
    }
    return Poly(std::move(c));
}

// C(v, j) as a polynomial in the BiPoly variable v.
BiPoly binomial_poly(const BiPoly& v, int j) {
    BiPoly r(1);
    for (int i = 0; i < j; ++i) r = r * (v - BiPoly(Rational(i)));
    r *= Rational(1, 1) / Rational(factorial(j));
    return r;
}

// p(X -> sx, u -> su).
BiPoly substitute(const BiPoly& p, const BiPoly& sx, const BiPoly& su) {
    int dx = 0, du = 0;
    for (const auto& [key, v] : p.terms()) {
        dx = std::max(dx, key.first);
        du = std::max(du, key.second);
    }
    std::vector<BiPoly> px{BiPoly(1)}, pu{BiPoly(1)};
    for (int i = 1; i <= dx; ++i) px.push_back(px.back() * sx);
    for (int i = 1; i <= du; ++i) pu.push_back(pu.back() * su);
    BiPoly r;
    for (const auto& [key, v] : p.terms()) {
        BiPoly t = px[key.first] * pu[key.second];
        t *= v;
        r += t;
    }
    return r;
}

class Tally {
public:
    explicit Tally(std::string name) { c_.name = std::move(name); }
    void record(bool ok, const std::string& where) {
        ++c_.cases;
        if (ok) return;
        if (c_.failures++ == 0) c_.first_failure = where;
    }
    IdentityCheck done() { return c_; }

private:
    IdentityCheck c_;
};

std::string params(const char* a, int x, const char* b = nullptr, int y = 0) {
    std::ostringstream os;
    os << a << "=" << x;
    if (b) os << " " << b << "=" << y;
    return os.str();
}

}  // namespace

IdentitySides gap_sides(int n, int j) {
    if (n < 1 || j < 1) throw DomainError("gap_sides: n and j must be positive");
    if (n > gap_max_n || j > gap_max_j) throw GuardExceeded("gap_sides: n <= 60 and j <= 12 only");
    std::vector<Integer> squares;
    for (int m = 0; 2 * m < n; ++m) squares.push_back(Integer(n - 2 * m) * Integer(n - 2 * m));
    IdentitySides s;
    s.lhs = elementary_symmetric(squares, j)[j];
    // R[a][i]: gap-2 i-sequences drawn from {1..a}.
    std::vector<std::vector<Integer>> R(n + 1, std::vector<Integer>(j + 1, 0));
    for (int a = 0; a <= n; ++a) R[a][0] = 1;
    for (int a = 1; a <= n; ++a) {
        const Integer w = Integer(a) * Integer(n + 1 - a);
        for (int i = 1; i <= j; ++i) R[a][i] = R[a - 1][i] + w * (a >= 2 ? R[a - 2][i - 1] : Integer(i == 1));
    }
    s.rhs = R[n][j];
    return s;
}

Poly fmk_poly(int M, int k) {
    if (M < 0 || k < 0) throw DomainError("fmk_poly: M and k must be non-negative");
    if (M > fmk_max_m) throw GuardExceeded("fmk_poly: M <= 40 only");
    if (2 * k > M) return Poly();
    if (k == 0) return Poly(1);
    return fmk_table()[M - 1][k];
}

BiPoly phi_poly(int M) {
    if (M < 0) throw DomainError("phi_poly: M must be non-negative");
    if (M > fmk_max_m) throw GuardExceeded("phi_poly: M <= 40 only");
    const BiPoly X = BiPoly::x(), u = BiPoly::y();
    BiPoly prev(1), cur = u;
    if (M == 0) return prev;
    for (int m = 1; m < M; ++m) {
        BiPoly w = X - BiPoly(Rational(m));
        w *= Rational(m);
        BiPoly next = u * cur - w * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

BiPoly phi_from_fmk(int M) {
    if (M > fmk_max_m) throw GuardExceeded("phi_from_fmk: M <= 40 only");
    BiPoly r;
    const BiPoly u = BiPoly::y();
    for (int k = 0; 2 * k <= M; ++k) {
        BiPoly f;
        const Poly p = fmk_poly(M, k);
        for (int i = 0; i <= p.degree(); ++i) {
            BiPoly t = BiPoly::x().pow(i);
            t *= p.coeff(i);
            f += t;
        }
        BiPoly term = f * u.pow(M - 2 * k);
        if (k % 2) term *= Rational(-1);
        r += term;
    }
    return r;
}

Poly phi_root_product(int M) {
    std::vector<Rational> roots;
    for (int l = -M + 1; l < M; ++l)
        if (((l - M) % 2 + 2) % 2 == 1) roots.emplace_back(l);
    return Poly::from_roots(roots);
}

bool AppendixReport::all_pass() const {
    for (const auto& c : checks)
        if (c.failures) return false;
    return true;
}

AppendixReport appendix_identities(int M_max, int n_max) {
    if (M_max < 0 || n_max < 0) throw DomainError("appendix_identities: bounds must be non-negative");
    if (M_max > appendix_max_m || n_max > appendix_max_n)
        throw GuardExceeded("appendix_identities: M <= 20 and n <= 10 only");
    AppendixReport rep;
    Tally rec("F(M,k) recursion");
    for (int M = 1; M <= M_max; ++M)
        for (int k = 0; 2 * (k + 1) <= M + 1; ++k) {
            const Poly lhs = fmk_poly(M + 1, k + 1) - fmk_poly(M, k + 1);
            const Poly rhs = Poly(std::vector<Rational>{Rational(-M * M), Rational(M)}) * fmk_poly(M - 1, k);
            rec.record(lhs == rhs, params("M", M, "k", k));
        }
    rep.checks.push_back(rec.done());

    Tally fmk("F(M,k) at X = M is an elementary symmetric sum of squares");
    for (int M = 0; M <= M_max; ++M) {
        std::vector<Integer> sq;
        for (int m = (M % 2 == 0) ? 1 : 2; m <= M - 1; m += 2) sq.push_back(Integer(m) * Integer(m));
        const std::vector<Integer> e = elementary_symmetric(sq, M / 2);
        for (int k = 0; 2 * k <= M; ++k)
            fmk.record(fmk_poly(M, k).eval(Rational(M)) == Rational(e[k]), params("M", M, "k", k));
    }
    rep.checks.push_back(fmk.done());

    std::vector<BiPoly> phi;
    for (int M = 0; M <= M_max + n_max; ++M) phi.push_back(phi_poly(M));

    Tally asm_("Phi_M by recursion equals its assembly from F(M,k)");
    for (int M = 0; M <= M_max; ++M) asm_.record(phi[M] == phi_from_fmk(M), params("M", M));
    rep.checks.push_back(asm_.done());

    Tally id("Phi_M at X = M is the product over its roots");
    for (int M = 0; M <= M_max; ++M) id.record(at_x(phi[M], Rational(M)) == phi_root_product(M), params("M", M));
    rep.checks.push_back(id.done());

    Tally p1("Phi_M at X = M - n is a binomial average of shifts");
    for (int M = 0; M <= M_max; ++M) {
        const Poly pm = phi_root_product(M);
        for (int n = 0; n <= n_max; ++n) {
            Poly avg;
            for (int j = 0; j <= n; ++j) avg += pm.shift(Rational(-n + 2 * j)) * Rational(binomial(n, j));
            avg *= Rational(1) / Rational(Integer(1) << n);
            p1.record(at_x(phi[M], Rational(M - n)) == avg, params("M", M, "n", n));
        }
    }
    rep.checks.push_back(p1.done());

    Tally p2("Phi_{M+n} at X = M factors into Phi_M and Phi_n");
    for (int M = 0; M <= M_max; ++M)
        for (int n = 0; n <= n_max; ++n)
            p2.record(at_x(phi[M + n], Rational(M)) == at_x(phi[M], Rational(M)) * at_x(phi[n], Rational(-M)),
                      params("M", M, "n", n));
    rep.checks.push_back(p2.done());

    // In the two identities below BiPoly x and y are the free variables x and y.
    const BiPoly x = BiPoly::x(), y = BiPoly::y();
    std::vector<BiPoly> G;
    for (int M = 0; M <= M_max + 1; ++M) {
        BiPoly g;
        for (int j = 0; j <= M; ++j) {
            BiPoly t = binomial_poly(x, j) * binomial_poly(y, M - j);
            if (j % 2) t *= Rational(-1);
            g += t;
        }
        G.push_back(std::move(g));
    }

    Tally p3("Phi_M(x + y + 1, y - x) / M! equals G_M(x, y)");
    const BiPoly sx = x + y + BiPoly(Rational(1)), su = y - x;
    for (int M = 0; M <= M_max; ++M) {
        BiPoly lhs = substitute(phi[M], sx, su);
        lhs *= Rational(1) / Rational(factorial(M));
        p3.record(lhs == G[M], params("M", M));
    }
    rep.checks.push_back(p3.done());

    // (1 - T)^x (1 + T)^y = exp(L), L = x log(1 - T) + y log(1 + T); E' = L'E gives
    // n E_n = sum_k k L_k E_{n-k} with k L_k = -x - (-1)^k y.
    Tally sg("G_M are the coefficients of (1 - T)^x (1 + T)^y");
    std::vector<BiPoly> E{BiPoly(1)};
    for (int n = 1; n <= M_max + 1; ++n) {
        BiPoly acc;
        for (int k = 1; k <= n; ++k) {
            BiPoly kl = (k % 2) ? (y - x) : (BiPoly(Rational(0)) - x - y);
            acc += kl * E[n - k];
        }
        acc *= Rational(1, n);
        E.push_back(std::move(acc));
    }
    for (int M = 0; M <= M_max + 1; ++M) sg.record(E[M] == G[M], params("M", M));
    for (int M = 1; M <= M_max; ++M) {
        BiPoly lhs = G[M + 1];
        lhs *= Rational(M + 1);
        BiPoly rhs = (y - x) * G[M] + (BiPoly(Rational(M - 1)) - x - y) * G[M - 1];
        sg.record(lhs == rhs, params("M", M) + " recursion");
    }
    rep.checks.push_back(sg.done());
    return rep;
}

IdentityCheck gap_identity_check(int n_max, int j_max) {
    if (n_max > gap_max_n || j_max > gap_max_j) throw GuardExceeded("gap_identity_check: n <= 60, j <= 12");
    Tally t("gap-sequence sums match the characteristic polynomial");
    for (int n = 1; n <= n_max; ++n) {
        const Poly cp = char_poly(n);
        const int lam = cp.degree();
        for (int j = 1; j <= j_max; ++j) {
            const IdentitySides s = gap_sides(n, j);
            bool ok = s.lhs == s.rhs;
            // The characteristic polynomial carries (-1)^j times the right side as its x^{lam - j} coefficient.
            const Rational c = j <= lam ? cp.coeff(lam - j) : Rational(0);
            ok = ok && c == Rational(j % 2 ? -s.rhs : s.rhs);
            t.record(ok, params("n", n, "j", j));
        }
    }
    return t.done();
}

}  // namespace walkdens
