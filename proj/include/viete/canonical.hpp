/* canonical.hpp
 *
 * Multitime canonical maps between the two deformed family types.
 *
 * A family whose members carry momentum-linear terms (the "magnetic" type)
 * can be mapped onto a plain potential family by a time-dependent shift of
 * the momenta,
 *
 *     p_i  ->  p_i + s_i(q, t),      s_i = sum_g d_g(t) V_1^{(n-m-i+g)},
 *
 * generated by a function F(q, t).  Each shifted row picks up dF/dt_r and
 * becomes a member of an ordinary family whose coefficient functions are
 * explicit quadratic expressions in the d_g.  This header builds the shift,
 * the induced coefficient functions, the mapped rows, and the equivalence
 * verdict against an independently solved ordinary family.
 *
 * Everything is exact; verification compares symbolic normal forms.
 */
#pragma once

#include "deform.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace viete {

namespace detail {

/// d_idx lookup with zero outside the stored range.
inline CoeffExpr dcoef(const std::map<int, CoeffExpr>& d, int idx) {
    auto it = d.find(idx);
    return it == d.end() ? CoeffExpr::zero() : it->second;
}

/// zeta_{r,j} with the identity convention on the diagonal.
inline CoeffExpr zeta_at(const std::map<std::pair<int, int>, CoeffExpr>& zeta,
                         int r, int j) {
    auto it = zeta.find({r, j});
    if (it != zeta.end()) return it->second;
    return r == j ? CoeffExpr::one() : CoeffExpr::zero();
}

} // namespace detail

// ------------------------------------------------------ momentum shift data

/// Shift added to p_i by the map, as a function of q and t.
inline std::vector<PhaseExpr> momentum_shift(int n, int m,
                                             const std::map<int, CoeffExpr>& d) {
    std::vector<PhaseExpr> s;
    s.reserve(n);
    for (int i = 1; i <= n; ++i) {
        PhaseExpr si(n);
        for (int g = 0; g <= n + 1; ++g) {
            CoeffExpr dg = detail::dcoef(d, g);
            if (dg.is_zero()) continue;
            si += dg * potential_V(n, n - m - i + g)[0];
        }
        s.push_back(std::move(si));
    }
    return s;
}

// ------------------------------------------- time derivatives of the action

/// dF/dt_r computed directly from the d_g: every d_g contributes its
/// t_r-derivative times the matching power sum.  The coefficient that would
/// sit on a logarithm (index m-1) must be constant; anything else is an
/// inconsistency of the family passed in.
inline PhaseExpr gen_dF(int n, int m, int r, const std::map<int, CoeffExpr>& d) {
    PhaseExpr out(n);
    for (int g = 0; g <= n + 1; ++g) {
        CoeffExpr dg = detail::dcoef(d, g).diff(r);
        if (g == m - 1) {
            if (!dg.is_zero())
                throw std::runtime_error(
                    "gen_dF: coefficient of index m-1 must be constant");
            continue;
        }
        if (dg.is_zero()) continue;
        out += (power_sum(n, g - m + 1) * dg) * (Rational(1) / Rational(g - m + 1));
    }
    return out;
}

/// dF/dt_r for an undeformed row, written as the closed power-sum blend:
/// rows on the first band mix positive power sums, rows on the second band
/// mix negative ones.
inline PhaseExpr gen_dF_blend(int n, int m, int r,
                              const std::map<int, CoeffExpr>& d) {
    IndexSets s = index_sets(n, m);
    PhaseExpr out(n);
    if (r == 1 || s.in_i1(r)) {
        for (int k = 1; k <= r; ++k)
            out += power_sum(n, k) * detail::dcoef(d, n - r + 1 + k);
    } else {
        for (int k = 1; k <= n - r + 1; ++k)
            out -= power_sum(n, -k) * detail::dcoef(d, n - r + 1 - k);
    }
    return out;
}

/// dF/dt_r for any row, via the row-mixing functions: deformed rows blend
/// the contributions of the members they combine.
inline PhaseExpr gen_dF_rows(int n, int m, int r,
                             const std::map<int, CoeffExpr>& d,
                             const std::map<std::pair<int, int>, CoeffExpr>& zeta) {
    IndexSets s = index_sets(n, m);
    if (!s.deformed(r)) return gen_dF_blend(n, m, r, d);
    PhaseExpr out(n);
    if (s.in_i1(r)) {
        for (int j = 1; j <= r; ++j) {
            CoeffExpr z = detail::zeta_at(zeta, r, j);
            if (z.is_zero()) continue;
            out += gen_dF_blend(n, m, j, d) * z;
        }
    } else {
        for (int j = 0; j <= n - r; ++j) {
            CoeffExpr z = detail::zeta_at(zeta, r, r + j);
            if (z.is_zero()) continue;
            out += gen_dF_blend(n, m, r + j, d) * z;
        }
    }
    return out;
}

// ----------------------------------------------------- shift action on W_r

/// Closed form of W_r(p + s) - W_r(p): a row-dependent constant plus the
/// negated power-sum blend plus a top-coefficient multiple of V_r^{(n)}.
inline PhaseExpr shift_W_expected(int n, int m, int r,
                                  const std::map<int, CoeffExpr>& d) {
    IndexSets s = index_sets(n, m);
    PhaseExpr out = -gen_dF_blend(n, m, r, d);
    out -= potential_V(n, n)[r - 1] * detail::dcoef(d, n + 1);
    if (s.in_i2(r))
        out += PhaseExpr::constant(n, detail::dcoef(d, n - r + 1) *
                                          Rational(n - r + 1));
    else if (r != 1)
        out -= PhaseExpr::constant(n, detail::dcoef(d, n - r + 1) *
                                          Rational(r - 1));
    return out;
}

/// The same difference computed directly: W_r is momentum-linear, so the
/// change under p -> p + s is the gradient contracted with the shift.
inline PhaseExpr shift_W_direct(int n, int m, int r,
                                const std::vector<PhaseExpr>& s) {
    PhaseExpr W = quasi_W(n, m, r);
    PhaseExpr out(n);
    for (int k = 1; k <= (int)s.size(); ++k) out += W.diff_p(k) * s[k - 1];
    return out;
}

// ------------------------------------------------ induced coefficient data

/// Coefficient functions of the ordinary family produced by the map:
/// half the convolution square of the d_g, the extra scalar multiplier on
/// V^{(n)}, and the top-coefficient correction from the shift of W_r.
inline std::map<int, CoeffExpr> induced_coeffs(int n, int m,
                                               const std::map<int, CoeffExpr>& d,
                                               const CoeffExpr& e) {
    std::map<int, CoeffExpr> c;
    for (int g1 = 0; g1 <= n + 1; ++g1) {
        CoeffExpr d1 = detail::dcoef(d, g1);
        if (d1.is_zero()) continue;
        for (int g2 = 0; g2 <= n + 1; ++g2) {
            CoeffExpr d2 = detail::dcoef(d, g2);
            if (d2.is_zero()) continue;
            c[g1 + g2 - m] += (d1 * d2) * Rational(1, 2);
        }
    }
    c[n] += e - detail::dcoef(d, n + 1);
    for (auto it = c.begin(); it != c.end();)
        it = it->second.is_zero() ? c.erase(it) : std::next(it);
    return c;
}

// ------------------------------------- derivative laws of the d functions

/// Expected t_r-derivative of d_gamma for a solved momentum-linear family:
/// four regimes depending on whether row r is deformed and on which band it
/// lies.  Undeformed rows shift the index by r; deformed rows blend shifted
/// indices through the row-mixing functions.
inline CoeffExpr expected_d_derivative(int n, int m, int gamma, int r,
                                       const std::map<int, CoeffExpr>& d,
                                       const std::map<std::pair<int, int>, CoeffExpr>& zeta) {
    IndexSets s = index_sets(n, m);
    const bool first_band = (r == 1) || s.in_i1(r);
    if (first_band) {
        if (gamma < m || gamma > m + r - 1) return CoeffExpr::zero();
        if (!s.deformed(r))
            return detail::dcoef(d, n - m + 2 + gamma - r) *
                   Rational(gamma - m + 1);
        CoeffExpr acc;
        for (int j = gamma - m + 1; j <= r; ++j)
            acc += detail::zeta_at(zeta, r, j) *
                   detail::dcoef(d, n - m + 2 + gamma - j);
        return acc * Rational(gamma - m + 1);
    }
    if (gamma < r - (n - m + 2) || gamma > m - 2) return CoeffExpr::zero();
    if (!s.deformed(r))
        return detail::dcoef(d, n - m + 2 + gamma - r) *
               Rational(-(gamma - m + 1));
    CoeffExpr acc;
    for (int j = 0; j <= n - m + 2 + gamma - r; ++j)
        acc += detail::zeta_at(zeta, r, r + j) *
               detail::dcoef(d, n - m + 2 + gamma - r - j);
    return acc * Rational(-(gamma - m + 1));
}

// ------------------------------------------------------------ full pipeline

/// Everything the map produces for one (n, m): both solved families, the
/// momentum shift, the mapped rows, the induced coefficient functions, and
/// the parameter dictionary read off at t = 0.
struct CanonicalMap {
    int n = 1, m = 0;
    DeformedSystem mag;                ///< momentum-linear side (b-parameters)
    DeformedSystem ord;                ///< potential side (a-parameters)
    std::vector<PhaseExpr> shift;      ///< s_1..s_n (index i-1)
    std::vector<PhaseExpr> mapped;     ///< image rows, index 0 unused
    std::map<int, CoeffExpr> induced;  ///< coefficient functions after the map
    std::map<int, CoeffExpr> a_values; ///< ordinary parameters in terms of b
};

inline CanonicalMap build_map_from(DeformedSystem mag, DeformedSystem ord) {
    CanonicalMap M;
    M.n = mag.n;
    M.m = mag.m;
    M.mag = std::move(mag);
    M.ord = std::move(ord);
    const int n = M.n, m = M.m;
    M.shift = momentum_shift(n, m, M.mag.funcs);

    std::vector<PhaseExpr> repl;
    repl.reserve(n);
    for (int i = 1; i <= n; ++i)
        repl.push_back(PhaseExpr::pvar(n, i) + M.shift[i - 1]);

    M.mapped.assign(n + 1, PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r)
        M.mapped[r] = M.mag.rows[r].subst_p(repl) + gen_dF(n, m, r, M.mag.funcs);

    M.induced = induced_coeffs(n, m, M.mag.funcs, M.mag.e_func);
    for (const auto& [alpha, c] : M.induced)
        M.a_values[alpha] = c.at_time_zero();
    return M;
}

inline CanonicalMap build_map(int n, int m, const DeformOptions& mag_opt = {},
                              const DeformOptions& ord_opt = {}) {
    return build_map_from(solve_deformation(n, m, true, mag_opt),
                          solve_deformation(n, m, false, ord_opt));
}

/// Outcome of comparing the mapped rows against the solved ordinary family
/// with its parameters replaced by the mapped values.  Row differences must
/// be free of q and p; what remains is the per-row gauge offset.
struct MapReport {
    bool ok = true;
    std::vector<std::string> issues;
    std::vector<CoeffExpr> row_offsets;  ///< index 0 unused
};

// ------------------------------------------------------- target witnesses

/// Register (or refresh) a scale symbol with reduction rule name^order = value.
inline int scale_symbol(const std::string& name, int order,
                        const CoeffExpr& value) {
    int id = symtab().ensure(name);
    set_power_rule(id, order, value);
    return id;
}
inline int scale_symbol(const std::string& name, int order, const Rational& value) {
    return scale_symbol(name, order, CoeffExpr::from(value));
}

namespace detail {

/// Exact square root of a single-monomial expression when one exists.
inline std::optional<CoeffExpr> exact_sqrt(const CoeffExpr& v) {
    if (v.is_zero()) return CoeffExpr::zero();
    if (v.terms.size() != 1) return std::nullopt;
    const auto& [m, c] = *v.terms.begin();
    if (m.has_time() || c < 0) return std::nullopt;
    for (const auto& [id, pw] : m.pp) {
        (void)id;
        if (pw % 2) return std::nullopt;
    }
    using boost::multiprecision::sqrt;
    Integer num = numerator(c), den = denominator(c);
    Integer rn = sqrt(num), rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    Mono half;
    half.pp = m.pp;
    for (auto& [id, pw] : half.pp) pw /= 2;
    CoeffExpr out;
    out.add_term(half, Rational(rn) / Rational(rd));
    return out;
}

/// Value w with w^2 = 2v: an exact root when available, else an adjoined
/// radical named `prefix`_<counter>.
inline CoeffExpr sqrt_double(const CoeffExpr& v, const std::string& prefix,
                             int& counter) {
    CoeffExpr twice = Rational(2) * v;
    if (auto root = exact_sqrt(twice)) return *root;
    int id = scale_symbol(prefix + "_" + std::to_string(counter++), 2, twice);
    return CoeffExpr::sym(id);
}

} // namespace detail

/// Outcome of deciding whether chosen initial values a_alpha of a potential
/// family are the image of the momentum-linear family under the map.
struct TargetWitness {
    bool exists = false;
    std::string obstruction;     ///< set when exists is false
    bool explicit_values = true; ///< witness materialized in the ring
    std::map<int, CoeffExpr> b;  ///< initial values of the linear side
    CoeffExpr ebar;              ///< charge constant
};

/// Triangular solve for initial values b_0..b_{n+1} whose map image matches
/// the targets.  At time zero the image coefficient a_alpha equals half the
/// (alpha+m)-th coefficient of B(x)^2 with B = sum b_g x^g, so the question
/// is whether the target polynomial is a perfect square.  Slots covered by
/// free gauge functions (tails and the charge constant) constrain nothing,
/// and they form a contiguous middle band, so a division ladder from each
/// end decides the question: leading zeros cascade down from the top band,
/// trailing zeros cascade up from the bottom band, and the first nonzero
/// target on each side seeds a square root (adjoined as a radical symbol
/// when it is not exact in the ring).  Undetermined middle values default to
/// zero; the charge constant absorbs its own slot.
inline TargetWitness magnetic_witness(int n, int m,
                                      const std::map<int, CoeffExpr>& a,
                                      const std::string& prefix = "w") {
    TargetWitness w;
    auto target = [&](int slot) {  // slot j carries the target for a_{j-m}
        auto it = a.find(slot - m);
        return it == a.end() ? CoeffExpr::zero() : it->second;
    };
    auto aname = [&](int slot) { return "a_" + std::to_string(slot - m); };
    int counter = 0;
    std::map<int, CoeffExpr> b;
    auto conv_known = [&](int j) {  // pairs of already-determined values
        CoeffExpr s;
        for (const auto& [g1, v1] : b) {
            if (v1.is_zero()) continue;
            auto it = b.find(j - g1);
            if (it != b.end()) s += Rational(1, 2) * v1 * it->second;
        }
        return s;
    };
    auto forced_msg = [&](int slot, const std::vector<int>& forced,
                          const char* side) {
        std::string msg = aname(slot) + " is a sum of products b_i b_j with "
                          "i + j = " + std::to_string(slot) +
                          ", and every such pair uses an index already forced "
                          "to zero (";
        for (std::size_t i = 0; i < forced.size(); ++i)
            msg += (i ? ", b_" : "b_") + std::to_string(forced[i]);
        msg += std::string(") by the zero targets ") + side +
               "; a nonzero target is unreachable";
        return msg;
    };

    // Top band: slots n+m+1 .. 2n+2 (targets a_{n+1} .. a_{2n-m+2}).
    {
        int h = n + 1;      // highest index not yet forced to vanish
        int lead = -1;      // index of the leading square once seeded
        CoeffExpr lead2;    // its squared value
        std::vector<int> forced;
        for (int j = 2 * n + 2; j > n + m; --j) {
            CoeffExpr T = target(j);
            if (lead >= 0) {
                int k = j - lead;
                CoeffExpr num = (T - conv_known(j)) * b[lead];
                auto q = CoeffExpr::divide(num, lead2);
                if (!q) w.explicit_values = false;
                b[k] = q ? *q : CoeffExpr::zero();
            } else if (j == 2 * h) {
                if (T.is_zero()) {
                    forced.push_back(h);
                    b[h] = CoeffExpr::zero();
                    --h;
                } else {
                    lead = h;
                    lead2 = Rational(2) * T;
                    b[h] = detail::sqrt_double(T, prefix, counter);
                }
            } else if (!T.is_zero()) {
                w.obstruction = forced_msg(j, forced, "above");
                return w;
            }
        }
    }

    // Bottom band: slots 0 .. m-1 (targets a_{-m} .. a_{-1}), mirrored.
    {
        int g = 0;          // lowest index not yet forced to vanish
        int lead = -1;
        CoeffExpr lead2;
        std::vector<int> forced;
        for (int j = 0; j < m; ++j) {
            CoeffExpr T = target(j);
            if (lead >= 0) {
                int k = j - lead;
                CoeffExpr num = (T - conv_known(j)) * b[lead];
                auto q = CoeffExpr::divide(num, lead2);
                if (!q) w.explicit_values = false;
                b[k] = q ? *q : CoeffExpr::zero();
            } else if (j == 2 * g) {
                if (T.is_zero()) {
                    forced.push_back(g);
                    b[g] = CoeffExpr::zero();
                    ++g;
                } else {
                    lead = g;
                    lead2 = Rational(2) * T;
                    b[g] = detail::sqrt_double(T, prefix, counter);
                }
            } else if (!T.is_zero()) {
                w.obstruction = forced_msg(j, forced, "below");
                return w;
            }
        }
    }

    for (int g = 0; g <= n + 1; ++g)
        if (!b.count(g)) b[g] = CoeffExpr::zero();
    w.exists = true;
    w.b = b;
    w.ebar = target(n + m) - conv_known(n + m) + b.at(n + 1);
    return w;
}

inline MapReport verify_map(const CanonicalMap& M) {
    MapReport rep;
    std::map<int, CoeffExpr> sub;
    for (const auto& [alpha, val] : M.a_values) {
        auto id = symtab().lookup(detail::const_name(false, alpha));
        if (id) sub[*id] = val;
    }
    rep.row_offsets.assign(M.n + 1, CoeffExpr::zero());
    for (int r = 1; r <= M.n; ++r) {
        PhaseExpr diff = M.mapped[r] - M.ord.rows[r].subst_syms(sub);
        if (!diff.phase_dependent_part().is_zero()) {
            rep.ok = false;
            rep.issues.push_back("row " + std::to_string(r) +
                                 " differs beyond a function of time");
            continue;
        }
        rep.row_offsets[r] = diff.phase_constant_part();
    }
    return rep;
}

} // namespace viete
