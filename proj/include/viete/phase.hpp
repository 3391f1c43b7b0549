/**
 * @file phase.hpp
 * @brief Polynomials on a 2n-dimensional phase space with CoeffExpr
 *        coefficients, and the canonical Poisson bracket.
 *
 * A PhaseExpr is a finite sum  sum_k  c_k(t, params) * q^{A_k} * p^{B_k}
 * with integer exponents.  All q and p powers are nonnegative except that
 * the last position variable q_n may carry negative powers (the generated
 * potential towers are Laurent in q_n only).
 *
 * Conventions used throughout the library:
 *   - indices are 1-based in the public interface,
 *   - the bracket is {f,g} = sum_k (df/dq_k dg/dp_k - df/dp_k dg/dq_k),
 *   - flows are xi' = {xi, H}, i.e. q' = +dH/dp, p' = -dH/dq.
 */
#pragma once

#include "coeff.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace viete {

/// Exponent vector of one phase monomial.
struct PhaseMono {
    std::vector<int> q;  ///< size n; q[n-1] may be negative
    std::vector<int> p;  ///< size n; all >= 0

    friend bool operator<(const PhaseMono& a, const PhaseMono& b) {
        if (int c = cmp_intvec(a.q, b.q)) return c < 0;
        return cmp_intvec(a.p, b.p) < 0;
    }
    friend bool operator==(const PhaseMono& a, const PhaseMono& b) {
        return a.q == b.q && a.p == b.p;
    }
};

class PhaseExpr {
public:
    int n = 0;
    std::map<PhaseMono, CoeffExpr> terms;

    PhaseExpr() = default;
    explicit PhaseExpr(int dim) : n(dim) { assert(dim >= 1); }

    static PhaseExpr zero(int n) { return PhaseExpr(n); }

    static PhaseExpr constant(int n, CoeffExpr c) {
        PhaseExpr e(n);
        if (!c.is_zero()) e.terms.emplace(e.unit_mono(), std::move(c));
        return e;
    }
    static PhaseExpr constant(int n, const Rational& r) {
        return constant(n, CoeffExpr::from(r));
    }

    /// q_i^pow; negative pow only allowed for i == n.
    static PhaseExpr qvar(int n, int i, int pow = 1) {
        assert(i >= 1 && i <= n);
        if (pow < 0 && i != n)
            throw std::domain_error("qvar: negative power only in q_n");
        PhaseExpr e(n);
        PhaseMono m = e.unit_mono();
        m.q[i - 1] = pow;
        e.terms.emplace(std::move(m), CoeffExpr::one());
        return e;
    }

    static PhaseExpr pvar(int n, int i, int pow = 1) {
        assert(i >= 1 && i <= n && pow >= 0);
        PhaseExpr e(n);
        PhaseMono m = e.unit_mono();
        m.p[i - 1] = pow;
        e.terms.emplace(std::move(m), CoeffExpr::one());
        return e;
    }

    bool is_zero() const { return terms.empty(); }

    /// True when no q or p appears (a pure function of times/parameters).
    bool is_phase_constant() const {
        for (const auto& [m, c] : terms) {
            (void)c;
            for (int e : m.q)
                if (e) return false;
            for (int e : m.p)
                if (e) return false;
        }
        return true;
    }

    CoeffExpr phase_constant_part() const {
        auto it = terms.find(unit_mono());
        return it == terms.end() ? CoeffExpr() : it->second;
    }

    /// Drop the phase-independent part, keep the rest.
    PhaseExpr phase_dependent_part() const {
        PhaseExpr out = *this;
        out.terms.erase(out.unit_mono());
        return out;
    }

    // ---- arithmetic -------------------------------------------------------

    PhaseExpr& operator+=(const PhaseExpr& o) {
        assert(n == o.n);
        for (const auto& [m, c] : o.terms) add_term(m, c);
        return *this;
    }
    PhaseExpr& operator-=(const PhaseExpr& o) {
        assert(n == o.n);
        for (const auto& [m, c] : o.terms) add_term(m, -c);
        return *this;
    }
    friend PhaseExpr operator+(PhaseExpr a, const PhaseExpr& b) { return a += b; }
    friend PhaseExpr operator-(PhaseExpr a, const PhaseExpr& b) { return a -= b; }
    friend PhaseExpr operator-(const PhaseExpr& a) {
        PhaseExpr r(a.n);
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
        return r;
    }

    friend PhaseExpr operator*(const PhaseExpr& a, const PhaseExpr& b) {
        assert(a.n == b.n);
        PhaseExpr r(a.n);
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                PhaseMono m = ma;
                for (int i = 0; i < a.n; ++i) {
                    m.q[i] += mb.q[i];
                    m.p[i] += mb.p[i];
                }
                r.add_term(std::move(m), ca * cb);
            }
        r.check_laurent();
        return r;
    }

    friend PhaseExpr operator*(const PhaseExpr& a, const CoeffExpr& c) {
        PhaseExpr r(a.n);
        for (const auto& [m, cc] : a.terms) r.add_term(m, cc * c);
        return r;
    }
    friend PhaseExpr operator*(const CoeffExpr& c, const PhaseExpr& a) { return a * c; }
    friend PhaseExpr operator*(const PhaseExpr& a, const Rational& s) {
        return a * CoeffExpr::from(s);
    }
    friend PhaseExpr operator*(const Rational& s, const PhaseExpr& a) { return a * s; }

    PhaseExpr pow(int e) const {
        assert(e >= 0);
        PhaseExpr r = constant(n, Rational(1));
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const PhaseExpr& a, const PhaseExpr& b) {
        return a.n == b.n && a.terms == b.terms;
    }

    // ---- calculus ---------------------------------------------------------

    PhaseExpr diff_q(int i) const {
        assert(i >= 1 && i <= n);
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) {
            int e = m.q[i - 1];
            if (e == 0) continue;
            PhaseMono mm = m;
            mm.q[i - 1] -= 1;
            out.add_term(std::move(mm), c * Rational(e));
        }
        return out;
    }

    PhaseExpr diff_p(int i) const {
        assert(i >= 1 && i <= n);
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) {
            int e = m.p[i - 1];
            if (e == 0) continue;
            PhaseMono mm = m;
            mm.p[i - 1] -= 1;
            out.add_term(std::move(mm), c * Rational(e));
        }
        return out;
    }

    /// Coefficient-level time derivative (q, p held fixed).
    PhaseExpr diff_t(int j) const {
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) out.add_term(m, c.diff(j));
        return out;
    }

    // ---- substitution -----------------------------------------------------

    /// Simultaneously replace every p_i by repl[i-1] (expressions may contain
    /// q's and p's; the substitution is one-pass).
    PhaseExpr subst_p(const std::vector<PhaseExpr>& repl) const {
        assert((int)repl.size() == n);
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) {
            PhaseExpr acc(n);
            PhaseMono qonly = unit_mono();
            qonly.q = m.q;
            acc.terms.emplace(std::move(qonly), c);
            for (int i = 0; i < n; ++i)
                if (m.p[i] > 0) acc = acc * repl[i].pow(m.p[i]);
            out += acc;
        }
        return out;
    }

    /// Coefficient map applied to every term (e.g. parameter substitution).
    PhaseExpr map_coeffs(const std::function<CoeffExpr(const CoeffExpr&)>& f) const {
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) out.add_term(m, f(c));
        return out;
    }

    PhaseExpr subst_syms(const std::map<int, CoeffExpr>& values) const {
        return map_coeffs([&](const CoeffExpr& c) { return c.subst_syms(values); });
    }

    // ---- evaluation -------------------------------------------------------

    /// Exact evaluation at rational q, p (t-dependence stays symbolic).
    /// Requires q_n != 0 when negative powers are present.
    CoeffExpr eval_qp(const std::vector<Rational>& qs,
                      const std::vector<Rational>& ps) const {
        assert((int)qs.size() == n && (int)ps.size() == n);
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            Rational f(1);
            for (int i = 0; i < n; ++i) {
                f *= rat_pow(qs[i], m.q[i]);
                f *= rat_pow(ps[i], m.p[i]);
            }
            out += c * f;
        }
        return out;
    }

    // ---- misc -------------------------------------------------------------

    int degree_p() const {
        int d = 0;
        for (const auto& [m, c] : terms) {
            (void)c;
            int s = 0;
            for (int e : m.p) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    /// Coefficient of p_i^k with all other p-powers zero, as q-only expr.
    PhaseExpr coeff_of_p(int i, int k) const {
        PhaseExpr out(n);
        for (const auto& [m, c] : terms) {
            bool ok = m.p[i - 1] == k;
            for (int j = 0; j < n && ok; ++j)
                if (j != i - 1 && m.p[j] != 0) ok = false;
            if (!ok) continue;
            PhaseMono mm = m;
            mm.p[i - 1] = 0;
            out.add_term(std::move(mm), c);
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
            for (int i = 0; i < n; ++i)
                if (m.q[i]) {
                    out += "*q" + std::to_string(i + 1);
                    if (m.q[i] != 1) out += "^" + std::to_string(m.q[i]);
                }
            for (int i = 0; i < n; ++i)
                if (m.p[i]) {
                    out += "*p" + std::to_string(i + 1);
                    if (m.p[i] != 1) out += "^" + std::to_string(m.p[i]);
                }
        }
        return out;
    }

    PhaseMono unit_mono() const {
        PhaseMono m;
        m.q.assign(n, 0);
        m.p.assign(n, 0);
        return m;
    }

    void add_term(PhaseMono m, const CoeffExpr& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    void check_laurent() const {
#ifndef NDEBUG
        for (const auto& [m, c] : terms) {
            (void)c;
            for (int i = 0; i + 1 < n; ++i) assert(m.q[i] >= 0);
            for (int i = 0; i < n; ++i) assert(m.p[i] >= 0);
        }
#endif
    }
};

/// Canonical Poisson bracket {f,g} = sum_k (f_q g_p - f_p g_q).
inline PhaseExpr pb(const PhaseExpr& f, const PhaseExpr& g) {
    assert(f.n == g.n);
    PhaseExpr out(f.n);
    for (int k = 1; k <= f.n; ++k) {
        out += f.diff_q(k) * g.diff_p(k);
        out -= f.diff_p(k) * g.diff_q(k);
    }
    return out;
}

struct PhasePoint {
    std::vector<Rational> q, p, t;
};

} // namespace viete
