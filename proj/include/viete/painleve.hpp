#pragma once
// One-degree-of-freedom members of the two families reduce, after exact
// elimination of the momentum and an explicit rescaling, to the four classical
// Painleve equations.  This header provides
//
//   * a small Laurent-polynomial algebra for second-order equations
//     M(x, x', s) x'' = R(x, x', s) whose coefficients are parameter
//     expressions (time enters only through the s / exp(s) exponents),
//   * exact momentum elimination for one-dimensional Hamiltonians,
//   * the one-dimensional families on both sides (potential coefficients
//     a_alpha, momentum-linear coefficients b_gamma),
//   * the four reductions PI..PIV with adjoined-radical scale arithmetic, and
//   * a decision procedure for when a potential-side member admits a
//     momentum-linear representative, returning an explicit witness or the
//     obstruction.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "viete/canonical.hpp"

namespace viete {

// ------------------------------------------------------------ ode monomial

/// Exponents of one term x^x * (x')^xt * s^s * exp(es * s).  The power of x
/// and of s may be negative; the power of the derivative may not.
struct OdeMono {
    int x = 0;
    int xt = 0;
    int s = 0;
    int es = 0;

    auto key() const { return std::tie(x, xt, s, es); }
    friend bool operator<(const OdeMono& a, const OdeMono& b) {
        return a.key() < b.key();
    }
    friend bool operator==(const OdeMono& a, const OdeMono& b) {
        return a.key() == b.key();
    }
};

// ---------------------------------------------------------------- ode poly

/// Polynomial in (x, x', s, exp(s)) over parameter-only coefficients.
class OdePoly {
public:
    std::map<OdeMono, CoeffExpr> terms;

    OdePoly() = default;

    static OdePoly zero() { return OdePoly(); }
    static OdePoly one() { return term({}, CoeffExpr::one()); }
    static OdePoly x(int pow = 1) { return term({pow, 0, 0, 0}, CoeffExpr::one()); }
    static OdePoly xt(int pow = 1) { return term({0, pow, 0, 0}, CoeffExpr::one()); }
    static OdePoly s(int pow = 1) { return term({0, 0, pow, 0}, CoeffExpr::one()); }
    static OdePoly es(int k) { return term({0, 0, 0, k}, CoeffExpr::one()); }

    static OdePoly term(OdeMono m, CoeffExpr c) {
        OdePoly p;
        p.add_term(m, std::move(c));
        return p;
    }

    void add_term(const OdeMono& m, const CoeffExpr& c) {
        if (c.is_zero()) return;
        assert(m.xt >= 0);
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const OdePoly& a, const OdePoly& b) {
        return a.terms == b.terms;
    }

    OdePoly& operator+=(const OdePoly& o) {
        for (const auto& [m, c] : o.terms) add_term(m, c);
        return *this;
    }
    OdePoly& operator-=(const OdePoly& o) {
        for (const auto& [m, c] : o.terms) add_term(m, -c);
        return *this;
    }
    friend OdePoly operator+(OdePoly a, const OdePoly& b) { return a += b; }
    friend OdePoly operator-(OdePoly a, const OdePoly& b) { return a -= b; }
    friend OdePoly operator-(const OdePoly& a) {
        OdePoly r;
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
        return r;
    }

    friend OdePoly operator*(const OdePoly& a, const OdePoly& b) {
        OdePoly r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms)
                r.add_term({ma.x + mb.x, ma.xt + mb.xt, ma.s + mb.s,
                            ma.es + mb.es},
                           ca * cb);
        return r;
    }
    friend OdePoly operator*(const OdePoly& a, const CoeffExpr& c) {
        OdePoly r;
        for (const auto& [m, v] : a.terms) r.add_term(m, v * c);
        return r;
    }
    friend OdePoly operator*(const CoeffExpr& c, const OdePoly& a) { return a * c; }
    friend OdePoly operator*(const OdePoly& a, const Rational& c) {
        return a * CoeffExpr::from(c);
    }
    friend OdePoly operator*(const Rational& c, const OdePoly& a) { return a * c; }

    OdePoly pow(int e) const {
        assert(e >= 0);
        OdePoly r = one();
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    OdePoly diff_x() const {
        OdePoly r;
        for (const auto& [m, c] : terms)
            if (m.x != 0)
                r.add_term({m.x - 1, m.xt, m.s, m.es}, c * Rational(m.x));
        return r;
    }
    OdePoly diff_xt() const {
        OdePoly r;
        for (const auto& [m, c] : terms)
            if (m.xt != 0)
                r.add_term({m.x, m.xt - 1, m.s, m.es}, c * Rational(m.xt));
        return r;
    }
    /// d/ds, acting on s^a exp(k s) factors.
    OdePoly diff_s() const {
        OdePoly r;
        for (const auto& [m, c] : terms) {
            if (m.s != 0)
                r.add_term({m.x, m.xt, m.s - 1, m.es}, c * Rational(m.s));
            if (m.es != 0) r.add_term(m, c * Rational(m.es));
        }
        return r;
    }

    OdePoly map_coeffs(const std::function<CoeffExpr(const CoeffExpr&)>& f) const {
        OdePoly r;
        for (const auto& [m, c] : terms) r.add_term(m, f(c));
        return r;
    }
    OdePoly subst_syms(const std::map<int, CoeffExpr>& values) const {
        return map_coeffs([&](const CoeffExpr& c) { return c.subst_syms(values); });
    }

    /// The value as a phase-space expression: x -> q_1, x' -> `xt_value`,
    /// s^a exp(k s) -> the matching time factor.
    PhaseExpr to_phase(const PhaseExpr& xt_value) const {
        PhaseExpr out(1);
        for (const auto& [m, c] : terms) {
            if (m.s < 0)
                throw std::domain_error("to_phase: negative power of time");
            PhaseExpr piece = PhaseExpr::constant(
                1, c * CoeffExpr::t(1, m.s) *
                       (m.es ? CoeffExpr::expt(1, m.es) : CoeffExpr::one()));
            if (m.x != 0) {
                PhaseExpr q(1);
                PhaseMono qm;
                qm.q = {m.x};
                qm.p = {0};
                q.terms.emplace(qm, CoeffExpr::one());
                piece = piece * q;
            }
            piece = piece * xt_value.pow(m.xt);
            out += piece;
        }
        return out;
    }

    std::string str() const {
        if (terms.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms) {
            if (!first) out += " + ";
            first = false;
            out += "(" + c.str() + ")";
            auto app = [&out](const char* v, int e) {
                if (!e) return;
                out += "*";
                out += v;
                if (e != 1) out += "^" + std::to_string(e);
            };
            app("x", m.x);
            app("x'", m.xt);
            app("s", m.s);
            if (m.es) out += "*exp(" + std::to_string(m.es) + "s)";
        }
        return out;
    }
};

/// Second-order equation M x'' = R.
struct OdePair {
    OdePoly M, R;

    friend bool operator==(const OdePair& a, const OdePair& b) {
        return a.M == b.M && a.R == b.R;
    }
    std::string str() const { return "(" + M.str() + ") x'' = " + R.str(); }
};

/// Equality as equations: cross-multiplied sides agree (handles an overall
/// scalar factor that normalization cannot divide out).
inline bool same_equation(const OdePair& a, const OdePair& b) {
    if (a.M.is_zero() || b.M.is_zero()) return false;
    return a.M * b.R == b.M * a.R;
}

// ------------------------------------------------------------ normalization

namespace detail {

inline Rational rat_gcd(const Rational& a, const Rational& b) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::lcm;
    if (a == 0) return b < 0 ? -b : b;
    if (b == 0) return a < 0 ? -a : a;
    Integer an = numerator(a), ad = denominator(a);
    Integer bn = numerator(b), bd = denominator(b);
    if (an < 0) an = -an;
    if (bn < 0) bn = -bn;
    return Rational(gcd(an, bn)) / Rational(lcm(ad, bd));
}

/// Greatest common rational factor of every coefficient in both sides.
inline Rational pair_content(const OdePair& e) {
    Rational g(0);
    for (const OdePoly* p : {&e.M, &e.R})
        for (const auto& [m, c] : p->terms) {
            (void)m;
            for (const auto& [cm, r] : c.terms) {
                (void)cm;
                g = rat_gcd(g, r);
            }
        }
    return g;
}

/// Divide out a symbol that every coefficient monomial carries with a
/// positive power (an overall constant factor of the equation).
inline void strip_common_symbols(OdePair& e) {
    while (true) {
        std::map<int, int> min_pow;
        bool first = true;
        for (const OdePoly* p : {&e.M, &e.R})
            for (const auto& [m, c] : p->terms) {
                (void)m;
                for (const auto& [cm, r] : c.terms) {
                    (void)r;
                    std::map<int, int> here;
                    for (const auto& [id, pw] : cm.pp) here[id] = pw;
                    if (first) {
                        min_pow = here;
                        first = false;
                        continue;
                    }
                    for (auto it = min_pow.begin(); it != min_pow.end();) {
                        auto h = here.find(it->first);
                        int pw = h == here.end() ? 0 : h->second;
                        it->second = std::min(it->second, pw);
                        if (it->second <= 0)
                            it = min_pow.erase(it);
                        else
                            ++it;
                    }
                }
            }
        std::erase_if(min_pow, [](const auto& kv) { return kv.second <= 0; });
        if (first || min_pow.empty()) return;
        for (OdePoly* p : {&e.M, &e.R}) {
            OdePoly out;
            for (const auto& [m, c] : p->terms) {
                CoeffExpr cc;
                for (const auto& [cm, r] : c.terms) {
                    Mono mm = cm;
                    for (auto& [id, pw] : mm.pp) {
                        auto it = min_pow.find(id);
                        if (it != min_pow.end()) pw -= it->second;
                    }
                    std::erase_if(mm.pp,
                                  [](const auto& pr) { return pr.second == 0; });
                    cc.add_term(mm, r);
                }
                out.add_term(m, cc);
            }
            *p = out;
        }
    }
}

} // namespace detail

/// Canonical form: common powers of x and s divided out of the equation,
/// rational content one, leading coefficient of M positive.
inline OdePair normalized(OdePair e) {
    if (e.M.is_zero() && e.R.is_zero()) return e;
    int minx = 0, mins = 0;
    bool first = true;
    for (const OdePoly* p : {&e.M, &e.R})
        for (const auto& [m, c] : p->terms) {
            (void)c;
            if (first) {
                minx = m.x;
                mins = m.s;
                first = false;
            } else {
                minx = std::min(minx, m.x);
                mins = std::min(mins, m.s);
            }
        }
    if (minx != 0 || mins != 0)
        for (OdePoly* p : {&e.M, &e.R}) {
            OdePoly out;
            for (const auto& [m, c] : p->terms)
                out.add_term({m.x - minx, m.xt, m.s - mins, m.es}, c);
            *p = out;
        }
    detail::strip_common_symbols(e);
    Rational g = detail::pair_content(e);
    if (g != 0 && g != 1) {
        e.M = e.M * (Rational(1) / g);
        e.R = e.R * (Rational(1) / g);
    }
    const OdePoly& lead = e.M.is_zero() ? e.R : e.M;
    if (lead.terms.rbegin()->second.terms.rbegin()->second < 0) {
        e.M = -e.M;
        e.R = -e.R;
    }
    return e;
}

// ------------------------------------------------------------- elimination

/// Convert a momentum-free one-dimensional phase expression; the coefficient
/// ring content moves into the s / exp(s) exponents.  Only the first time may
/// appear, and only explicitly.
inline OdePoly to_ode(const PhaseExpr& f) {
    if (f.n != 1) throw std::domain_error("to_ode: dimension must be one");
    OdePoly out;
    for (const auto& [pm, c] : f.terms) {
        if (pm.p[0] != 0)
            throw std::domain_error("to_ode: momentum present");
        for (const auto& [cm, r] : c.terms) {
            if (cm.tp.size() > 1 || cm.ep.size() > 1)
                throw std::domain_error("to_ode: second time present");
            for (const auto& [id, pw] : cm.pp) {
                (void)pw;
                if (symtab().time_dependent(id))
                    throw std::domain_error("to_ode: unresolved function of time");
            }
            Mono param;
            param.pp = cm.pp;
            CoeffExpr pc;
            pc.add_term(param, r);
            out.add_term({pm.q[0], 0, cm.tp.empty() ? 0 : cm.tp[0],
                          cm.ep.empty() ? 0 : cm.ep[0]},
                         pc);
        }
    }
    return out;
}

/// Newton polygon of the flow of h = A2/2 p^2 + A1 p + A0: the momentum is
/// solved from x' = A2 p + A1 and removed from x'' along the flow, giving
///   A2 x'' = (A2_x x' + A2_s)(x' - A1) - 1/2 A2_x (x' - A1)^2
///            - A1_x (x' - A1) A2 - A2^2 A0_x + A2 (A1_x x' + A1_s).
inline OdePair eliminate_from(const OdePoly& A2, const OdePoly& A1,
                              const OdePoly& A0) {
    if (A2.is_zero())
        throw std::domain_error("eliminate_from: momentum square term vanishes");
    OdePoly xt = OdePoly::xt();
    OdePoly u = xt - A1;
    OdePoly A2x = A2.diff_x(), A2s = A2.diff_s();
    OdePoly A1x = A1.diff_x(), A1s = A1.diff_s();
    OdePair e;
    e.M = A2;
    e.R = (A2x * xt + A2s) * u - Rational(1, 2) * (A2x * u * u) -
          A1x * u * A2 - A2 * A2 * A0.diff_x() + A2 * (A1x * xt + A1s);
    return e;
}

/// Eliminate the momentum from a one-dimensional Hamiltonian, at most
/// quadratic in p.
inline OdePair eliminate_momentum(const PhaseExpr& h) {
    if (h.n != 1) throw std::domain_error("eliminate_momentum: dimension");
    if (h.degree_p() > 2)
        throw std::domain_error("eliminate_momentum: degree in p exceeds two");
    return eliminate_from(to_ode(h.coeff_of_p(1, 2)) * Rational(2),
                          to_ode(h.coeff_of_p(1, 1)), to_ode(h.coeff_of_p(1, 0)));
}

// -------------------------------------------------------- variable changes

namespace detail {

/// v^e for a single-monomial constant v; negative e inverts the monomial
/// (symbol powers need rational-valued reduction rules to normalize later).
inline CoeffExpr coeff_mono_pow(const CoeffExpr& v, int e) {
    if (e >= 0) return v.pow(e);
    if (v.terms.size() != 1)
        throw std::domain_error("coeff_mono_pow: inverse of a sum");
    const auto& [m, c] = *v.terms.begin();
    if (m.has_time() || c == 0)
        throw std::domain_error("coeff_mono_pow: not an invertible constant");
    Mono inv;
    inv.pp = m.pp;
    for (auto& [id, pw] : inv.pp) pw = -pw;
    CoeffExpr base;
    base.add_term(inv, Rational(1) / c);
    base.normalize();
    return base.pow(-e);
}

} // namespace detail

/// Substitute x = lam * y, s = mu * u with constant single-monomial scales
/// (typically carrying adjoined radicals).  Result is stated in (y, u) but
/// keeps the same variable slots.
inline OdePair subst_scale(const OdePair& e, const CoeffExpr& lam,
                           const CoeffExpr& mu) {
    auto sub = [&](const OdePoly& p) {
        OdePoly out;
        for (const auto& [m, c] : p.terms) {
            if (m.es)
                throw std::domain_error("subst_scale: exponential factor present");
            CoeffExpr f = c * detail::coeff_mono_pow(lam, m.x) *
                          detail::coeff_mono_pow(mu, m.s);
            if (m.xt)
                f = f * detail::coeff_mono_pow(lam, m.xt) *
                    detail::coeff_mono_pow(mu, -m.xt);
            out.add_term(m, f);
        }
        return out;
    };
    OdePair r;
    r.M = sub(e.M) * (lam * detail::coeff_mono_pow(mu, -2));
    r.R = sub(e.R);
    return r;
}

/// Pass to the exponential of the time: s_new = exp(s_old).  Polynomial
/// dependence on the old time must be absent; exp(k s) becomes s^k and
/// derivatives pick up the usual Euler factors.
inline OdePair log_time(const OdePair& e) {
    auto push = [](const OdePoly& p) {
        OdePoly out;
        for (const auto& [m, c] : p.terms) {
            if (m.s != 0)
                throw std::domain_error("log_time: polynomial time dependence");
            out.add_term({m.x, m.xt, m.es + m.xt, 0}, c);
        }
        return out;
    };
    OdePair r;
    OdePoly M = push(e.M), R = push(e.R);
    r.M = M * OdePoly::s(2);
    r.R = R - M * OdePoly::term({0, 1, 1, 0}, CoeffExpr::one());
    return r;
}

/// Substitute s = tc * u^tk and x = qc * u^qk * y for a new independent
/// variable u.  All factors are exact Laurent monomials.
inline OdePair mono_time(const OdePair& e, const Rational& tc, int tk,
                         const Rational& qc, int qk) {
    if (tc == 0 || tk == 0 || qc == 0)
        throw std::domain_error("mono_time: degenerate substitution");
    struct LM {
        Rational c;
        int k;
    };
    auto mul = [](LM a, LM b) { return LM{a.c * b.c, a.k + b.k}; };
    auto divi = [](LM a, LM b) { return LM{a.c / b.c, a.k - b.k}; };
    LM phi{qc, qk};
    LM phi1{qc * Rational(qk), qk - 1};
    LM phi2{qc * Rational(qk) * Rational(qk - 1), qk - 2};
    LM psi1{tc * Rational(tk), tk - 1};
    LM psi2{tc * Rational(tk) * Rational(tk - 1), tk - 2};

    // x' in the new frame: (phi' y + phi y') / psi'.
    OdePoly xt_new;
    if (phi1.c != 0) {
        LM a = divi(phi1, psi1);
        xt_new.add_term({1, 0, a.k, 0}, CoeffExpr::from(a.c));
    }
    {
        LM b = divi(phi, psi1);
        xt_new.add_term({0, 1, b.k, 0}, CoeffExpr::from(b.c));
    }

    auto sub = [&](const OdePoly& p) {
        OdePoly out;
        for (const auto& [m, c] : p.terms) {
            if (m.es)
                throw std::domain_error("mono_time: exponential factor present");
            OdePoly base = OdePoly::term(
                {m.x, 0, tk * m.s + qk * m.x, 0},
                c * rat_pow(tc, m.s) * rat_pow(qc, m.x));
            out += base * xt_new.pow(m.xt);
        }
        return out;
    };

    // x'' = w2 y'' + w1 y' + w0 y with Laurent-monomial weights.
    LM ps2 = mul(psi1, psi1), ps3 = mul(ps2, psi1);
    LM w2 = divi(phi, ps2);
    auto minus = [](LM a) { return LM{-a.c, a.k}; };
    auto add_poly = [](OdePoly& p, OdeMono m, LM v) {
        if (v.c != 0) {
            m.s += v.k;
            p.add_term(m, CoeffExpr::from(v.c));
        }
    };
    OdePoly low;  // w1 y' + w0 y
    add_poly(low, {0, 1, 0, 0}, divi(LM{2 * phi1.c, phi1.k}, ps2));
    add_poly(low, {0, 1, 0, 0}, minus(divi(mul(phi, psi2), ps3)));
    add_poly(low, {1, 0, 0, 0}, divi(phi2, ps2));
    add_poly(low, {1, 0, 0, 0}, minus(divi(mul(phi1, psi2), ps3)));

    OdePair r;
    OdePoly Ms = sub(e.M);
    r.M = Ms * OdePoly::term({0, 0, w2.k, 0}, CoeffExpr::from(w2.c));
    r.R = sub(e.R) - Ms * low;
    return r;
}

// ------------------------------------------------- one-dimensional families

/// Potential-side coefficient functions of the one-dimensional family,
/// expressed through their initial values a_alpha.
inline std::map<int, CoeffExpr> line_ordinary_coeffs(int m) {
    auto A = [](int idx) {
        return CoeffExpr::param(detail::const_name(false, idx));
    };
    CoeffExpr t = CoeffExpr::t(1);
    std::map<int, CoeffExpr> c;
    switch (m) {
    case 0:
        c[4] = A(4);
        c[3] = A(3);
        c[2] = Rational(2) * A(4) * t + A(2);
        c[1] = A(3) * t + A(1);
        break;
    case 1:
        c[3] = A(3);
        c[2] = Rational(2) * A(3) * t + A(2);
        c[1] = A(3) * t * t + A(2) * t + A(1);
        c[-1] = A(-1);
        break;
    case 2:
        c[2] = A(2) * CoeffExpr::expt(1, 2);
        c[1] = A(1) * CoeffExpr::expt(1, 1);
        c[-1] = A(-1);
        c[-2] = A(-2);
        break;
    default:
        throw std::domain_error("line_ordinary_coeffs: m out of range");
    }
    return c;
}

/// Momentum-linear-side coefficient functions, through initial values b_gamma.
inline std::map<int, CoeffExpr> line_magnetic_coeffs(int m) {
    auto B = [](int idx) {
        return CoeffExpr::param(detail::const_name(true, idx));
    };
    CoeffExpr t = CoeffExpr::t(1);
    std::map<int, CoeffExpr> d;
    switch (m) {
    case 0:
        d[0] = B(2) * t + B(0);
        d[1] = B(1);
        d[2] = B(2);
        break;
    case 1:
        d[0] = B(0);
        d[1] = B(2) * t + B(1);
        d[2] = B(2);
        break;
    case 2:
        d[0] = B(0);
        d[1] = B(1);
        d[2] = B(2) * CoeffExpr::expt(1, 1);
        break;
    default:
        throw std::domain_error("line_magnetic_coeffs: m out of range");
    }
    return d;
}

inline CoeffExpr line_magnetic_e(int m) {
    CoeffExpr eb = CoeffExpr::param("bbar");
    return m == 2 ? eb * CoeffExpr::expt(1, 1) : eb;
}

/// Assemble the single-row system on either side.
inline DeformedSystem line_system(int m, bool magnetic) {
    if (m < 0 || m > 2) throw std::domain_error("line_system: m out of range");
    DeformedSystem sys;
    sys.n = 1;
    sys.m = m;
    sys.magnetic = magnetic;
    sys.zeta[{1, 1}] = CoeffExpr::one();
    sys.funcs = magnetic ? line_magnetic_coeffs(m) : line_ordinary_coeffs(m);
    sys.e_func = magnetic ? line_magnetic_e(m) : CoeffExpr::zero();
    SystemSpec spec;
    spec.n = 1;
    spec.m = m;
    spec.magnetic = magnetic;
    spec.coeffs = sys.funcs;
    spec.e_coeff = sys.e_func;
    sys.members.assign(2, PhaseExpr::zero(1));
    sys.rows.assign(2, PhaseExpr::zero(1));
    sys.members[1] = assemble(spec, 1);
    sys.rows[1] = sys.members[1];
    return sys;
}

/// Momentum-shift map between the two one-dimensional sides.
inline CanonicalMap line_map(int m) {
    return build_map_from(line_system(m, true), line_system(m, false));
}

/// The single row with chosen initial values substituted for the a-symbols.
inline PhaseExpr line_ordinary_row_at(int m,
                                      const std::map<int, CoeffExpr>& a_vals) {
    DeformedSystem sys = line_system(m, false);
    std::map<int, CoeffExpr> sub;
    for (const auto& [alpha, v] : a_vals) {
        auto id = symtab().lookup(detail::const_name(false, alpha));
        if (id) sub[*id] = v;
    }
    return sys.rows[1].subst_syms(sub);
}

// --------------------------------------------------------------- reductions

/// A family member carried into one of the four classical equations.
struct OdeReduction {
    std::string name;           ///< "PI" .. "PIV"
    int m = 0;                  ///< family used
    std::map<int, CoeffExpr> a; ///< initial values selecting the member
    OdePair frame;              ///< eliminated equation of that member
    OdePair reduced;            ///< after the change of variables
    OdePair target;             ///< classical equation, parameters induced
    std::map<std::string, CoeffExpr> constants; ///< classical parameter values
    std::string change;         ///< the substitution, human-readable
    bool matches = false;       ///< reduced and target agree as equations
};

inline OdeReduction painleve_one() {
    OdeReduction r;
    r.name = "PI";
    r.m = 0;
    r.a = {{4, CoeffExpr::zero()},
           {3, CoeffExpr::from(Rational(-1))},
           {2, CoeffExpr::zero()},
           {1, CoeffExpr::zero()}};
    r.frame = normalized(eliminate_momentum(line_ordinary_row_at(0, r.a)));
    int u = scale_symbol("rt5", 5, Rational(2));  // rt5^5 = 2
    r.reduced = normalized(
        subst_scale(r.frame, CoeffExpr::sym(u, 3), CoeffExpr::sym(u)));
    r.target.M = OdePoly::one();
    r.target.R = Rational(6) * OdePoly::x(2) + OdePoly::s();
    r.change = "x = rt5^3 y, s = rt5 u, rt5^5 = 2";
    r.matches = r.reduced == r.target && same_equation(r.reduced, r.target);
    return r;
}

inline OdeReduction painleve_two() {
    OdeReduction r;
    r.name = "PII";
    r.m = 0;
    CoeffExpr alpha = CoeffExpr::param("alpha");
    r.a = {{4, CoeffExpr::from(Rational(1, 4))},
           {3, CoeffExpr::zero()},
           {2, CoeffExpr::zero()},
           {1, -alpha}};
    r.frame = normalized(eliminate_momentum(line_ordinary_row_at(0, r.a)));
    int u = scale_symbol("rt2", 2, Rational(2));  // rt2^2 = 2
    r.reduced = normalized(
        subst_scale(r.frame, CoeffExpr::sym(u), CoeffExpr::one()));
    CoeffExpr alpha_new = Rational(1, 2) * CoeffExpr::sym(u) * alpha;
    r.target.M = OdePoly::one();
    r.target.R = Rational(2) * OdePoly::x(3) +
                 OdePoly::term({1, 0, 1, 0}, CoeffExpr::one()) +
                 OdePoly::term({}, alpha_new);
    r.constants = {{"alpha", alpha_new}};
    r.change = "x = rt2 y, rt2^2 = 2";
    r.matches = same_equation(r.reduced, r.target);
    return r;
}

inline OdeReduction painleve_three() {
    OdeReduction r;
    r.name = "PIII";
    r.m = 2;
    auto A = [](int idx) {
        return CoeffExpr::param(detail::const_name(false, idx));
    };
    r.a = {{2, A(2)}, {1, A(1)}, {-1, A(-1)}, {-2, A(-2)}};
    r.frame = normalized(eliminate_momentum(line_system(2, false).rows[1]));
    r.reduced = normalized(
        mono_time(log_time(r.frame), Rational(1, 2), 2, Rational(1), -1));
    CoeffExpr al = Rational(-2) * A(1), be = Rational(4) * A(-1);
    CoeffExpr ga = Rational(2) * A(2), de = Rational(-8) * A(-2);
    r.target.M = OdePoly::term({1, 0, 1, 0}, CoeffExpr::one());
    r.target.R = OdePoly::term({0, 2, 1, 0}, CoeffExpr::one()) -
                 OdePoly::term({1, 1, 0, 0}, CoeffExpr::one()) +
                 OdePoly::term({3, 0, 0, 0}, al) +
                 OdePoly::term({1, 0, 0, 0}, be) +
                 OdePoly::term({4, 0, 1, 0}, ga) +
                 OdePoly::term({0, 0, 1, 0}, de);
    r.constants = {{"alpha", al}, {"beta", be}, {"gamma", ga}, {"delta", de}};
    r.change = "s -> exp, then s = u^2/2, x = y/u";
    r.matches = r.reduced == r.target && same_equation(r.reduced, r.target);
    return r;
}

inline OdeReduction painleve_four() {
    OdeReduction r;
    r.name = "PIV";
    r.m = 1;
    auto A = [](int idx) {
        return CoeffExpr::param(detail::const_name(false, idx));
    };
    r.a = {{3, CoeffExpr::one()},
           {2, CoeffExpr::zero()},
           {1, A(1)},
           {-1, A(-1)}};
    r.frame = normalized(eliminate_momentum(line_ordinary_row_at(1, r.a)));
    int u = scale_symbol("rt4", 4, Rational(2));  // rt4^4 = 2
    CoeffExpr lam = Rational(-1, 2) * CoeffExpr::sym(u);
    r.reduced = normalized(subst_scale(r.frame, lam, CoeffExpr::sym(u)));
    CoeffExpr al = Rational(-1, 2) * CoeffExpr::sym(u, 2) * A(1);
    CoeffExpr be = Rational(-4) * A(-1);
    r.target.M = Rational(2) * OdePoly::x();
    r.target.R = OdePoly::xt(2) + Rational(3) * OdePoly::x(4) +
                 Rational(8) * OdePoly::term({3, 0, 1, 0}, CoeffExpr::one()) +
                 Rational(4) * OdePoly::term({2, 0, 2, 0}, CoeffExpr::one()) +
                 OdePoly::term({2, 0, 0, 0}, Rational(-4) * al) +
                 OdePoly::term({}, Rational(2) * be);
    r.constants = {{"alpha", al}, {"beta", be}};
    r.change = "x = -(rt4/2) y, s = rt4 u, rt4^4 = 2";
    r.matches = r.reduced == r.target && same_equation(r.reduced, r.target);
    return r;
}

inline std::vector<OdeReduction> all_reductions() {
    return {painleve_one(), painleve_two(), painleve_three(), painleve_four()};
}

// ------------------------------------------------- momentum-linear witness

/// Outcome of deciding whether chosen initial values a_alpha come from the
/// momentum-linear side.  When they do and the defining quotients stay in
/// the coefficient ring, `b` and `ebar` carry an explicit witness (possibly
/// with adjoined square roots); otherwise `exists` still reports the
/// structural answer.
struct LineWitness {
    bool exists = false;
    std::string obstruction;     ///< set when exists is false
    bool explicit_values = true; ///< witness materialized in the ring
    std::map<int, CoeffExpr> b;  ///< initial values of the linear side
    CoeffExpr ebar;              ///< charge constant
};

/// Decide representability of the member with initial values `a` on the
/// momentum-linear side of the one-dimensional family, adjoining radicals
/// named from `prefix` as needed.
inline LineWitness line_witness(int m, const std::map<int, CoeffExpr>& a,
                                const std::string& prefix = "w") {
    auto get = [&a](int idx) {
        auto it = a.find(idx);
        return it == a.end() ? CoeffExpr::zero() : it->second;
    };
    LineWitness w;
    int counter = 0;
    auto quot = [&w](const CoeffExpr& num, const CoeffExpr& den) {
        auto q = CoeffExpr::divide(num, den);
        if (!q) w.explicit_values = false;
        return q ? *q : CoeffExpr::zero();
    };
    switch (m) {
    case 0: {
        CoeffExpr a4 = get(4), a3 = get(3), a2 = get(2), a1 = get(1);
        if (a4.is_zero() && !a3.is_zero()) {
            w.obstruction =
                "a_4 = 0 forces b_2 = 0, hence a_3 = b_1 b_2 = 0; a_3 != 0";
            return w;
        }
        w.exists = true;
        if (a4.is_zero()) {
            w.b[2] = CoeffExpr::zero();
            w.b[1] = detail::sqrt_double(a2, prefix, counter);
            w.b[0] = CoeffExpr::zero();
            w.ebar = a1;
        } else {
            w.b[2] = detail::sqrt_double(a4, prefix, counter);
            w.b[1] = quot(a3 * w.b[2], Rational(2) * a4);
            w.b[0] = quot((a2 - Rational(1, 2) * w.b[1] * w.b[1]) * w.b[2],
                          Rational(2) * a4);
            w.ebar = a1 - w.b[0] * w.b[1] + w.b[2];
        }
        return w;
    }
    case 1: {
        CoeffExpr a3 = get(3), a2 = get(2), a1 = get(1), am1 = get(-1);
        if (a3.is_zero() && !a2.is_zero()) {
            w.obstruction =
                "a_3 = 0 forces b_2 = 0, hence a_2 = b_1 b_2 = 0; a_2 != 0";
            return w;
        }
        w.exists = true;
        w.b[0] = detail::sqrt_double(am1, prefix, counter);
        if (a3.is_zero()) {
            w.b[2] = CoeffExpr::zero();
            w.b[1] = CoeffExpr::zero();
            w.ebar = a1;
        } else {
            w.b[2] = detail::sqrt_double(a3, prefix, counter);
            w.b[1] = quot(a2 * w.b[2], Rational(2) * a3);
            w.ebar = a1 - Rational(1, 2) * w.b[1] * w.b[1] -
                     w.b[0] * w.b[2] + w.b[2];
        }
        return w;
    }
    case 2: {
        CoeffExpr a2 = get(2), a1 = get(1), am1 = get(-1), am2 = get(-2);
        if (am2.is_zero() && !am1.is_zero()) {
            w.obstruction =
                "a_-2 = 0 forces b_0 = 0, hence a_-1 = b_0 b_1 = 0; a_-1 != 0";
            return w;
        }
        w.exists = true;
        w.b[2] = detail::sqrt_double(a2, prefix, counter);
        w.b[0] = detail::sqrt_double(am2, prefix, counter);
        w.b[1] = am2.is_zero() ? CoeffExpr::zero()
                               : quot(am1 * w.b[0], Rational(2) * am2);
        w.ebar = a1 - w.b[1] * w.b[2] + w.b[2];
        return w;
    }
    default:
        throw std::domain_error("line_witness: m out of range");
    }
}

/// Induced potential-side initial values of a witness (read at time zero).
inline std::map<int, CoeffExpr> line_induced_a(int m,
                                               const std::map<int, CoeffExpr>& b,
                                               const CoeffExpr& ebar) {
    std::map<int, CoeffExpr> sub;
    for (const auto& [gamma, v] : b) {
        auto id = symtab().lookup(detail::const_name(true, gamma));
        if (id) sub[*id] = v;
    }
    if (auto id = symtab().lookup("bbar")) sub[*id] = ebar;
    std::map<int, CoeffExpr> d;
    for (const auto& [gamma, f] : line_magnetic_coeffs(m))
        d[gamma] = f.subst_syms(sub);
    CoeffExpr e = line_magnetic_e(m).subst_syms(sub);
    std::map<int, CoeffExpr> out;
    for (const auto& [alpha, c] : induced_coeffs(1, m, d, e))
        out[alpha] = c.at_time_zero();
    return out;
}

} // namespace viete
