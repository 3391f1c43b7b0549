/**
 * @file coeff.hpp
 * @brief Exact coefficient ring: rational combinations of time monomials,
 *        exponentials of times, and named parameters.
 *
 * A CoeffExpr is a finite sum of terms
 *
 *     r * t_1^{a_1}...t_N^{a_N} * exp(k_1 t_1 + ... + k_N t_N) * s_1^{e_1}...
 *
 * with r rational, a_j >= 0, k_j integers (either sign), and s_i named
 * symbols.  Symbols serve three roles:
 *
 *   - plain parameters (free constants of a family),
 *   - unknown functions of the times (flagged time-dependent; differentiation
 *     produces fresh derivative symbols "name@j", restricted to a per-symbol
 *     set of allowed directions),
 *   - scale symbols carrying a power-reduction rule s^k = value, used for
 *     exact arithmetic with roots of rationals or of other coefficients.
 *
 * Terms are kept in a canonical order (time powers, then exponential
 * weights, then symbol factors ordered by name), which makes printing and
 * serialization deterministic.
 */
#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace viete {

// ------------------------------------------------------------------ symbols

class SymbolTable {
public:
    /// Register (or look up) a symbol.  `tdep` marks unknown functions of the
    /// times; `mask` bit j-1 set means the function may depend on t_j.
    int ensure(const std::string& name, bool tdep = false,
               std::uint64_t mask = ~0ull) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        tdep_.push_back(tdep);
        mask_.push_back(tdep ? mask : 0ull);
        ids_.emplace(name, id);
        return id;
    }

    const std::string& name(int id) const { return names_.at(id); }
    bool time_dependent(int id) const { return tdep_.at(id); }
    bool may_depend(int id, int j) const {  // j is 1-based
        return tdep_.at(id) && ((mask_.at(id) >> (j - 1)) & 1u);
    }

    /// Derivative symbol of `id` in direction t_j (creates it on first use).
    int deriv(int id, int j) {
        auto key = std::make_pair(id, j);
        auto it = derivs_.find(key);
        if (it != derivs_.end()) return it->second;
        int d = ensure(names_.at(id) + "@" + std::to_string(j), true, mask_.at(id));
        derivs_.emplace(key, d);
        return d;
    }

    std::optional<int> lookup(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<std::string> names_;
    std::vector<bool> tdep_;
    std::vector<std::uint64_t> mask_;
    std::map<std::string, int> ids_;
    std::map<std::pair<int, int>, int> derivs_;
};

inline SymbolTable& symtab() {
    static SymbolTable tab;
    return tab;
}

// ----------------------------------------------------------------- monomial

/// Key of one term.  Trailing zeros of tp/ep are stripped so equal monomials
/// compare equal regardless of how many times are "in scope".
struct Mono {
    std::vector<int> tp;                      ///< t_j powers (>= 0), index j-1
    std::vector<int> ep;                      ///< exp weight k_j, index j-1
    std::vector<std::pair<int, int>> pp;      ///< (symbol id, power != 0), name-sorted

    void strip() {
        while (!tp.empty() && tp.back() == 0) tp.pop_back();
        while (!ep.empty() && ep.back() == 0) ep.pop_back();
    }
    bool is_constant() const { return tp.empty() && ep.empty() && pp.empty(); }
    bool has_time() const { return !tp.empty() || !ep.empty(); }
};

inline int cmp_intvec(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int x = i < a.size() ? a[i] : 0;
        int y = i < b.size() ? b[i] : 0;
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

inline int cmp_mono(const Mono& a, const Mono& b) {
    if (int c = cmp_intvec(a.tp, b.tp)) return c;
    if (int c = cmp_intvec(a.ep, b.ep)) return c;
    std::size_t n = std::min(a.pp.size(), b.pp.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& na = symtab().name(a.pp[i].first);
        const std::string& nb = symtab().name(b.pp[i].first);
        if (na != nb) return na < nb ? -1 : 1;
        if (a.pp[i].second != b.pp[i].second)
            return a.pp[i].second < b.pp[i].second ? -1 : 1;
    }
    if (a.pp.size() != b.pp.size()) return a.pp.size() < b.pp.size() ? -1 : 1;
    return 0;
}

inline bool operator<(const Mono& a, const Mono& b) { return cmp_mono(a, b) < 0; }
inline bool operator==(const Mono& a, const Mono& b) { return cmp_mono(a, b) == 0; }

struct PowerRule;
inline std::map<int, PowerRule>& power_rules();

// ---------------------------------------------------------------- CoeffExpr

class CoeffExpr {
public:
    std::map<Mono, Rational> terms;

    CoeffExpr() = default;
    explicit CoeffExpr(const Rational& r) {
        if (r != 0) terms.emplace(Mono{}, r);
    }
    explicit CoeffExpr(long v) : CoeffExpr(Rational(v)) {}

    static CoeffExpr zero() { return CoeffExpr(); }
    static CoeffExpr one() { return CoeffExpr(Rational(1)); }
    static CoeffExpr from(const Rational& r) { return CoeffExpr(r); }

    /// t_j^pow (j is 1-based).
    static CoeffExpr t(int j, int pow = 1) {
        assert(j >= 1 && pow >= 0);
        if (pow == 0) return one();
        CoeffExpr e;
        Mono m;
        m.tp.assign(j, 0);
        m.tp[j - 1] = pow;
        e.terms.emplace(std::move(m), Rational(1));
        return e;
    }

    /// exp(k * t_j).
    static CoeffExpr expt(int j, int k) {
        assert(j >= 1);
        if (k == 0) return one();
        CoeffExpr e;
        Mono m;
        m.ep.assign(j, 0);
        m.ep[j - 1] = k;
        e.terms.emplace(std::move(m), Rational(1));
        return e;
    }

    /// Symbol by id, optionally raised to a power >= 1.
    static CoeffExpr sym(int id, int pow = 1) {
        assert(pow >= 1);
        CoeffExpr e;
        Mono m;
        m.pp.emplace_back(id, pow);
        e.terms.emplace(std::move(m), Rational(1));
        e.normalize();
        return e;
    }

    /// Symbol by name (registered as a plain parameter if new).
    static CoeffExpr param(const std::string& name) {
        return sym(symtab().ensure(name));
    }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const {
        return terms.empty() ||
               (terms.size() == 1 && terms.begin()->first.is_constant());
    }
    Rational constant_value() const {
        if (terms.empty()) return Rational(0);
        assert(is_constant());
        return terms.begin()->second;
    }

    // ---- arithmetic -------------------------------------------------------

    CoeffExpr& operator+=(const CoeffExpr& o) {
        for (const auto& [m, r] : o.terms) add_term(m, r);
        return *this;
    }
    CoeffExpr& operator-=(const CoeffExpr& o) {
        for (const auto& [m, r] : o.terms) add_term(m, -r);
        return *this;
    }
    friend CoeffExpr operator+(CoeffExpr a, const CoeffExpr& b) { return a += b; }
    friend CoeffExpr operator-(CoeffExpr a, const CoeffExpr& b) { return a -= b; }
    friend CoeffExpr operator-(const CoeffExpr& a) {
        CoeffExpr r;
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
        return r;
    }

    friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
        CoeffExpr r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms)
                r.add_term(mul_mono(ma, mb), ca * cb);
        r.normalize();
        return r;
    }
    CoeffExpr& operator*=(const CoeffExpr& o) { return *this = *this * o; }

    friend CoeffExpr operator*(const CoeffExpr& a, const Rational& s) {
        if (s == 0) return CoeffExpr();
        CoeffExpr r;
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, c * s);
        return r;
    }
    friend CoeffExpr operator*(const Rational& s, const CoeffExpr& a) { return a * s; }
    friend CoeffExpr operator/(const CoeffExpr& a, const Rational& s) {
        assert(s != 0);
        return a * (Rational(1) / s);
    }

    CoeffExpr pow(int e) const {
        assert(e >= 0);
        CoeffExpr r = one();
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    friend bool operator==(const CoeffExpr& a, const CoeffExpr& b) {
        return a.terms == b.terms;
    }

    // ---- calculus ---------------------------------------------------------

    /// Partial derivative with respect to t_j (1-based).  Time-dependent
    /// symbols contribute derivative symbols in their allowed directions.
    CoeffExpr diff(int j) const {
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            int tpj = (int)m.tp.size() >= j ? m.tp[j - 1] : 0;
            int epj = (int)m.ep.size() >= j ? m.ep[j - 1] : 0;
            if (tpj > 0) {  // monomial factor
                Mono mm = m;
                mm.tp[j - 1] -= 1;
                mm.strip();
                out.add_term(mm, c * tpj);
            }
            if (epj != 0) {  // exponential factor
                out.add_term(m, c * epj);
            }
            for (std::size_t i = 0; i < m.pp.size(); ++i) {  // chain rule
                auto [id, e] = m.pp[i];
                if (!symtab().may_depend(id, j)) continue;
                Mono mm = m;
                if (e == 1)
                    mm.pp.erase(mm.pp.begin() + i);
                else
                    mm.pp[i].second -= 1;
                CoeffExpr piece;
                piece.add_term(mm, c * e);
                piece *= sym(symtab().deriv(id, j));
                out += piece;
            }
        }
        out.normalize();
        return out;
    }

    /// An antiderivative with respect to t_j.  For terms with no exp(k t_j)
    /// factor it is the one vanishing at t_j = 0; exponential terms use the
    /// closed form (integration by parts), which does not vanish there.
    /// The expression must not contain unknown functions of t_j.
    CoeffExpr integrate(int j) const {
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            for (const auto& [id, e] : m.pp) {
                (void)e;
                if (symtab().may_depend(id, j))
                    throw std::domain_error("integrate: unknown function of t_" +
                                            std::to_string(j) + " present");
            }
            int a = (int)m.tp.size() >= j ? m.tp[j - 1] : 0;
            int k = (int)m.ep.size() >= j ? m.ep[j - 1] : 0;
            if (k == 0) {
                Mono mm = m;
                if ((int)mm.tp.size() < j) mm.tp.resize(j, 0);
                mm.tp[j - 1] = a + 1;
                out.add_term(mm, c / Rational(a + 1));
            } else {
                // I(a) = t^a e/k - (a/k) I(a-1), I(0) = e/k, e = exp(k t_j).
                Rational coef = c / Rational(k);
                int p = a;
                while (true) {
                    Mono mm = m;
                    if ((int)mm.tp.size() < j) mm.tp.resize(j, 0);
                    mm.tp[j - 1] = p;
                    mm.strip();
                    out.add_term(mm, coef);
                    if (p == 0) break;
                    coef = -coef * Rational(p) / Rational(k);
                    --p;
                }
            }
        }
        out.normalize();
        return out;
    }

    // ---- substitution / evaluation ---------------------------------------

    /// Set one time to zero: t_j^a -> 0 (a > 0), exp(k t_j) -> 1.
    CoeffExpr at_time_zero_dir(int j) const {
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            if ((int)m.tp.size() >= j && m.tp[j - 1] > 0) continue;
            Mono mm = m;
            if ((int)mm.ep.size() >= j) {
                mm.ep[j - 1] = 0;
                mm.strip();
            }
            out.add_term(mm, c);
        }
        return out;
    }

    /// Set every time to zero: t_j^a -> 0 (a > 0), exp -> 1.
    CoeffExpr at_time_zero() const {
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            if (!m.tp.empty()) continue;
            Mono mm = m;
            mm.ep.clear();
            out.add_term(mm, c);
        }
        out.normalize();
        return out;
    }

    /// Replace symbol `id` by an expression (applied to every power).
    CoeffExpr subst_sym(int id, const CoeffExpr& value) const {
        CoeffExpr out;
        for (const auto& [m, c] : terms) {
            int e = 0;
            Mono mm = m;
            for (std::size_t i = 0; i < mm.pp.size(); ++i)
                if (mm.pp[i].first == id) {
                    e = mm.pp[i].second;
                    mm.pp.erase(mm.pp.begin() + i);
                    break;
                }
            if (e == 0) {
                out.add_term(mm, c);
            } else if (e > 0) {
                CoeffExpr piece;
                piece.add_term(mm, c);
                out += piece * value.pow(e);
            } else {
                throw std::domain_error("subst_sym: negative power of " +
                                        symtab().name(id));
            }
        }
        out.normalize();
        return out;
    }

    CoeffExpr subst_syms(const std::map<int, CoeffExpr>& values) const {
        CoeffExpr out = *this;
        for (const auto& [id, v] : values)
            if (out.mentions(id)) out = out.subst_sym(id, v);
        return out;
    }

    bool mentions(int id) const {
        for (const auto& [m, c] : terms) {
            (void)c;
            for (const auto& [pid, e] : m.pp) {
                (void)e;
                if (pid == id) return true;
            }
        }
        return false;
    }

    bool depends_on_time() const {
        for (const auto& [m, c] : terms) {
            (void)c;
            if (m.has_time()) return true;
            for (const auto& [pid, e] : m.pp) {
                (void)e;
                if (symtab().time_dependent(pid)) return true;
            }
        }
        return false;
    }

    /// Symbols present for which `pred` holds (all symbols if no predicate).
    std::set<int> symbols(const std::function<bool(int)>& pred = nullptr) const {
        std::set<int> out;
        for (const auto& [m, c] : terms) {
            (void)c;
            for (const auto& [pid, e] : m.pp) {
                (void)e;
                if (!pred || pred(pid)) out.insert(pid);
            }
        }
        return out;
    }

    /// Group terms by the power of symbol `id`: power -> cofactor.
    std::map<int, CoeffExpr> collect(int id) const {
        std::map<int, CoeffExpr> out;
        for (const auto& [m, c] : terms) {
            int e = 0;
            Mono mm = m;
            for (std::size_t i = 0; i < mm.pp.size(); ++i)
                if (mm.pp[i].first == id) {
                    e = mm.pp[i].second;
                    mm.pp.erase(mm.pp.begin() + i);
                    break;
                }
            out[e].add_term(mm, c);
        }
        return out;
    }

    /// Numeric value; all symbols must have been substituted away.
    double eval(const std::vector<double>& tv) const {
        double acc = 0;
        for (const auto& [m, c] : terms) {
            if (!m.pp.empty())
                throw std::domain_error("eval: unresolved symbol " +
                                        symtab().name(m.pp[0].first));
            double v = rat_double(c);
            for (std::size_t j = 0; j < m.tp.size(); ++j)
                for (int i = 0; i < m.tp[j]; ++i) v *= j < tv.size() ? tv[j] : 0.0;
            double ex = 0;
            for (std::size_t j = 0; j < m.ep.size(); ++j)
                ex += m.ep[j] * (j < tv.size() ? tv[j] : 0.0);
            acc += v * std::exp(ex);
        }
        return acc;
    }

    // ---- division ---------------------------------------------------------

    /// Exact division: returns a/b if the quotient exists in the ring.
    static std::optional<CoeffExpr> divide(const CoeffExpr& a, const CoeffExpr& b);

    // ---- printing ---------------------------------------------------------

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms) {
            Rational cc = c;
            if (!first) {
                os << (cc < 0 ? " - " : " + ");
                if (cc < 0) cc = -cc;
            }
            first = false;
            std::vector<std::string> factors;
            if (cc != 1 || m.is_constant()) factors.push_back(rat_str(cc));
            for (std::size_t j = 0; j < m.tp.size(); ++j)
                if (m.tp[j]) {
                    std::string f = "t" + std::to_string(j + 1);
                    if (m.tp[j] != 1) f += "^" + std::to_string(m.tp[j]);
                    factors.push_back(f);
                }
            for (std::size_t j = 0; j < m.ep.size(); ++j)
                if (m.ep[j]) {
                    std::string f = "exp(";
                    if (m.ep[j] != 1) f += std::to_string(m.ep[j]) + "*";
                    f += "t" + std::to_string(j + 1) + ")";
                    factors.push_back(f);
                }
            for (const auto& [id, e] : m.pp) {
                std::string f = symtab().name(id);
                if (e != 1) f += "^" + std::to_string(e);
                factors.push_back(f);
            }
            for (std::size_t i = 0; i < factors.size(); ++i)
                os << (i ? "*" : "") << factors[i];
        }
        return os.str();
    }

    // ---- internals --------------------------------------------------------

    void add_term(Mono m, const Rational& c) {
        if (c == 0) return;
        m.strip();
        auto [it, fresh] = terms.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    static Mono mul_mono(const Mono& a, const Mono& b) {
        Mono r;
        r.tp.resize(std::max(a.tp.size(), b.tp.size()), 0);
        for (std::size_t i = 0; i < a.tp.size(); ++i) r.tp[i] += a.tp[i];
        for (std::size_t i = 0; i < b.tp.size(); ++i) r.tp[i] += b.tp[i];
        r.ep.resize(std::max(a.ep.size(), b.ep.size()), 0);
        for (std::size_t i = 0; i < a.ep.size(); ++i) r.ep[i] += a.ep[i];
        for (std::size_t i = 0; i < b.ep.size(); ++i) r.ep[i] += b.ep[i];
        r.pp = merge_pp(a.pp, b.pp, 1);
        r.strip();
        return r;
    }

    static std::optional<Mono> div_mono(const Mono& a, const Mono& b);

    void normalize();

private:
    static std::vector<std::pair<int, int>> merge_pp(
        const std::vector<std::pair<int, int>>& a,
        const std::vector<std::pair<int, int>>& b, int sgn) {
        std::vector<std::pair<int, int>> r;
        std::size_t i = 0, j = 0;
        auto nm = [](int id) -> const std::string& { return symtab().name(id); };
        while (i < a.size() || j < b.size()) {
            if (j >= b.size() || (i < a.size() && nm(a[i].first) < nm(b[j].first))) {
                r.push_back(a[i++]);
            } else if (i >= a.size() || nm(b[j].first) < nm(a[i].first)) {
                r.emplace_back(b[j].first, sgn * b[j].second);
                ++j;
            } else {
                int e = a[i].second + sgn * b[j].second;
                if (e != 0) r.emplace_back(a[i].first, e);
                ++i;
                ++j;
            }
        }
        return r;
    }
};

// -------------------------------------------------------------- power rules

/// Reduction rule s^order = value; `value` may contain other symbols.  A
/// negative power of s is only reducible when `value` is a nonzero rational.
struct PowerRule {
    int order = 0;
    CoeffExpr value;
};

inline std::map<int, PowerRule>& power_rules() {
    static std::map<int, PowerRule> rules;
    return rules;
}

inline void set_power_rule(int id, int order, const CoeffExpr& value) {
    assert(order >= 2 && !value.is_zero());
    power_rules()[id] = PowerRule{order, value};
}

inline void set_power_rule(int id, int order, const Rational& value) {
    set_power_rule(id, order, CoeffExpr::from(value));
}

inline void CoeffExpr::normalize() {
    if (power_rules().empty()) return;
    bool again = true;
    while (again) {
        again = false;
        for (auto it = terms.begin(); it != terms.end(); ++it) {
            const Mono& m = it->first;
            for (std::size_t i = 0; i < m.pp.size(); ++i) {
                auto [id, e] = m.pp[i];
                auto rit = power_rules().find(id);
                if (rit == power_rules().end()) continue;
                int k = rit->second.order;
                if (e < k && e > 0) continue;
                Mono mm = m;
                Rational c = it->second;
                terms.erase(it);
                int folds = e >= 0 ? e / k : -((-e + k - 1) / k);
                int ee = e - folds * k;  // now 0 <= ee < k
                if (ee == 0)
                    mm.pp.erase(mm.pp.begin() + i);
                else
                    mm.pp[i].second = ee;
                CoeffExpr piece;
                piece.add_term(std::move(mm), c);
                if (folds > 0) {
                    piece = piece * rit->second.value.pow(folds);
                } else if (folds < 0) {
                    if (!rit->second.value.is_constant())
                        throw std::domain_error(
                            "normalize: negative power of scale symbol with "
                            "non-constant rule");
                    piece = piece * rat_pow(rit->second.value.constant_value(),
                                            folds);
                }
                for (const auto& [pm, pc] : piece.terms) add_term(pm, pc);
                again = true;
                break;
            }
            if (again) break;
        }
    }
}

inline std::optional<Mono> CoeffExpr::div_mono(const Mono& a, const Mono& b) {
    Mono r;
    r.tp.resize(std::max(a.tp.size(), b.tp.size()), 0);
    for (std::size_t i = 0; i < a.tp.size(); ++i) r.tp[i] += a.tp[i];
    for (std::size_t i = 0; i < b.tp.size(); ++i) r.tp[i] -= b.tp[i];
    for (int v : r.tp)
        if (v < 0) return std::nullopt;
    r.ep.resize(std::max(a.ep.size(), b.ep.size()), 0);
    for (std::size_t i = 0; i < a.ep.size(); ++i) r.ep[i] += a.ep[i];
    for (std::size_t i = 0; i < b.ep.size(); ++i) r.ep[i] -= b.ep[i];
    r.pp = merge_pp(a.pp, b.pp, -1);
    for (const auto& [id, e] : r.pp)
        if (e < 0 && !power_rules().count(id)) return std::nullopt;
    r.strip();
    return r;
}

inline std::optional<CoeffExpr> CoeffExpr::divide(const CoeffExpr& a,
                                                  const CoeffExpr& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return CoeffExpr();
    CoeffExpr rem = a, quot;
    const auto& lb = *b.terms.rbegin();
    // The term order is not compatible with multiplication in every corner
    // (name-positional symbol comparison, negative exponential weights), so
    // the elimination loop must be allowed to give up: bound both the number
    // of rounds and the size of the remainder.
    const std::size_t size_cap = 64 * (a.terms.size() + b.terms.size() + 4);
    for (int guard = 0; guard < 4000 && !rem.is_zero(); ++guard) {
        if (rem.terms.size() > size_cap) return std::nullopt;
        const auto& la = *rem.terms.rbegin();
        auto q = div_mono(la.first, lb.first);
        if (!q) return std::nullopt;
        CoeffExpr step;
        step.add_term(*q, la.second / lb.second);
        step.normalize();
        quot += step;
        rem -= step * b;
    }
    if (!rem.is_zero()) return std::nullopt;
    return quot;
}

/// Convenience: derivative symbol of an unknown function, as an expression.
inline CoeffExpr cf_deriv_sym(int id, int j) {
    return CoeffExpr::sym(symtab().deriv(id, j));
}

} // namespace viete
