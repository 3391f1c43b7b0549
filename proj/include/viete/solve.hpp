/**
 * @file solve.hpp
 * @brief Exact solver for the first-order PDE systems that determine the
 *        time-dependent coefficients of integrable families.
 *
 * Input: a list of CoeffExpr equations (each must vanish identically) in a
 * set of unknown functions of the times.  Every unknown carries a mask of
 * directions it may depend on; differentiation introduces the derivative
 * symbols "u@j" that appear in the equations.
 *
 * Two mechanisms cooperate:
 *
 *   - a worklist pass for the triangular part: an unknown is solved as soon
 *     as equations isolating it (no other unsolved unknown present) either
 *     give it algebraically, or provide per-direction data du/dt_j = k_j u
 *     + f_j with constant integer k_j covering its whole direction mask;
 *     the closed-form integral is taken after an exact cross-derivative
 *     compatibility check (zero or a named integration constant);
 *
 *   - a linear-ansatz pass for the gauge-underdetermined remainder (the
 *     "tail" functions): candidates are expanded over a finite basis of
 *     time monomials times the exponential signatures present in the
 *     equations, and the resulting exact linear system is row-reduced.
 *     Leftover free coefficients are zeroed, except that a free constant
 *     term becomes the unknown's named integration constant.
 *
 * Explicit presets pin chosen unknowns to given functions, which are then
 * verified rather than trusted.
 */
#pragma once

#include "coeff.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace viete {

struct Unknown {
    int id = -1;                     ///< time-dependent symbol
    std::optional<int> const_sym;    ///< integration constant (none = zero)
    bool gauge_free = false;         ///< defer to the linear-ansatz stage
    int priority = 0;                ///< deterministic ordering among tails
};

struct SolveOutcome {
    bool ok = false;
    std::string message;
    std::map<int, CoeffExpr> solution;   ///< unknown id -> function of times
};

class PdeSolver {
public:
    int ntimes = 1;
    std::vector<Unknown> unknowns;
    std::map<int, CoeffExpr> presets;
    /// Optional origin labels parallel to the equation list (diagnostics).
    std::vector<std::string> labels;

    SolveOutcome run(const std::vector<CoeffExpr>& equations) const {
        SolveOutcome out;
        std::map<int, int> parent;  // family symbol -> unknown id
        for (const auto& u : unknowns) {
            parent[u.id] = u.id;
            for (int j = 1; j <= ntimes; ++j)
                if (symtab().may_depend(u.id, j))
                    parent[symtab().deriv(u.id, j)] = u.id;
        }
        std::set<int> solved;
        std::vector<CoeffExpr> eqs = equations;

        auto record = [&](int id, const CoeffExpr& f) {
            std::map<int, CoeffExpr> sub;
            sub.emplace(id, f);
            for (int j = 1; j <= ntimes; ++j)
                if (symtab().may_depend(id, j))
                    sub.emplace(symtab().deriv(id, j), f.diff(j));
            for (auto& e : eqs) e = e.subst_syms(sub);
            out.solution[id] = f;
            solved.insert(id);
        };

        for (const auto& [id, f] : presets) record(id, f);

        auto family_of = [&](const CoeffExpr& e) {
            std::set<int> fam;
            for (int s : e.symbols())
                if (auto it = parent.find(s);
                    it != parent.end() && !solved.count(it->second))
                    fam.insert(it->second);
            return fam;
        };

        // ---- worklist pass over the non-gauge unknowns --------------------
        bool progress = true;
        while (progress) {
            progress = false;
            std::erase_if(eqs, [](const CoeffExpr& e) { return e.is_zero(); });
            for (const auto& u : unknowns) {
                if (solved.count(u.id) || u.gauge_free) continue;
                std::vector<const CoeffExpr*> isolating;
                bool all_isolating = true;
                for (const auto& e : eqs) {
                    auto fam = family_of(e);
                    if (!fam.count(u.id)) continue;
                    if (fam.size() == 1)
                        isolating.push_back(&e);
                    else
                        all_isolating = false;
                }
                if (isolating.empty()) continue;
                auto sol = solve_one(u, isolating, all_isolating, out);
                if (!sol) {
                    if (!out.message.empty()) return out;  // hard error
                    continue;                              // defer
                }
                record(u.id, *sol);
                progress = true;
            }
        }

        // ---- linear-ansatz pass over the gauge-free remainder -------------
        std::erase_if(eqs, [](const CoeffExpr& e) { return e.is_zero(); });
        std::vector<const Unknown*> tails;
        for (const auto& u : unknowns)
            if (!solved.count(u.id) && u.gauge_free) tails.push_back(&u);
        std::sort(tails.begin(), tails.end(),
                  [](const Unknown* a, const Unknown* b) {
                      return a->priority < b->priority;
                  });
        if (!tails.empty()) {
            if (!ansatz_solve(tails, eqs, family_of, record, out)) return out;
        }

        // ---- verification -------------------------------------------------
        for (const auto& u : unknowns)
            if (!solved.count(u.id)) {
                out.message = "unknown left unsolved: " + symtab().name(u.id);
                return out;
            }
        std::map<int, CoeffExpr> full;
        for (const auto& [id, f] : out.solution) {
            full.emplace(id, f);
            for (int j = 1; j <= ntimes; ++j)
                if (symtab().may_depend(id, j))
                    full.emplace(symtab().deriv(id, j), f.diff(j));
        }
        for (std::size_t i = 0; i < equations.size(); ++i) {
            CoeffExpr r = equations[i].subst_syms(full);
            if (!r.is_zero()) {
                out.message = "equation not satisfied";
                if (i < labels.size()) out.message += " [" + labels[i] + "]";
                out.message += ": " + r.str();
                return out;
            }
        }
        out.ok = true;
        return out;
    }

private:
    /// Solve one unknown from its isolating equations.  Returns nullopt to
    /// defer; a hard error sets out.message.
    std::optional<CoeffExpr> solve_one(const Unknown& u,
                                       const std::vector<const CoeffExpr*>& eqs,
                                       bool all_isolating,
                                       SolveOutcome& out) const {
        std::vector<int> dirs;
        std::map<int, int> dir_of;  // deriv symbol -> direction
        for (int j = 1; j <= ntimes; ++j)
            if (symtab().may_depend(u.id, j)) {
                dirs.push_back(j);
                dir_of[symtab().deriv(u.id, j)] = j;
            }

        // Algebraic equation: B*u + C = 0 with no derivative symbols.
        for (const CoeffExpr* e : eqs) {
            bool has_deriv = false;
            for (int s : e->symbols())
                if (dir_of.count(s)) has_deriv = true;
            if (has_deriv) continue;
            auto parts = e->collect(u.id);
            if (parts.count(2) || !parts.count(1)) continue;  // not linear
            CoeffExpr B = parts[1];
            CoeffExpr C = parts.count(0) ? parts[0] : CoeffExpr();
            if (B.mentions(u.id)) continue;
            auto q = CoeffExpr::divide(-C, B);
            if (q) return q;
        }

        // Directional data: du/dt_j = k_j u + f_j.
        std::map<int, Rational> kk;
        std::map<int, CoeffExpr> ff;
        for (int j : dirs) {
            int dsym = symtab().deriv(u.id, j);
            for (const CoeffExpr* e : eqs) {
                if (!e->mentions(dsym)) continue;
                bool other_deriv = false;
                for (int s : e->symbols())
                    if (dir_of.count(s) && s != dsym) other_deriv = true;
                if (other_deriv) continue;
                auto dp = e->collect(dsym);
                if (dp.count(2) || !dp.count(1)) continue;
                CoeffExpr A = dp[1];
                if (A.mentions(u.id) || A.mentions(dsym)) continue;
                CoeffExpr R = dp.count(0) ? dp[0] : CoeffExpr();
                auto up = R.collect(u.id);
                if (up.count(2)) continue;
                CoeffExpr B = up.count(1) ? up[1] : CoeffExpr();
                CoeffExpr C = up.count(0) ? up[0] : CoeffExpr();
                // A*du + B*u + C = 0  =>  du = k u + f.
                Rational k(0);
                if (!B.is_zero()) {
                    auto kq = CoeffExpr::divide(-B, A);
                    if (!kq || !kq->is_constant()) continue;
                    k = kq->constant_value();
                }
                auto fq = CoeffExpr::divide(-C, A);
                if (!fq) continue;
                kk[j] = k;
                ff[j] = *fq;
                break;
            }
        }
        // Missing directions are only safely unconstrained when no equation
        // outside the isolating set mentions this unknown.
        for (int j : dirs)
            if (!kk.count(j)) {
                if (!all_isolating) return std::nullopt;
                kk[j] = Rational(0);
                ff[j] = CoeffExpr();
            }

        // Exponential prefactor from the homogeneous parts.
        CoeffExpr E = CoeffExpr::one(), Einv = CoeffExpr::one();
        for (int j : dirs) {
            if (kk[j] == 0) continue;
            if (denominator(kk[j]) != 1) {
                out.message = "non-integer exponential rate for " +
                              symtab().name(u.id);
                return std::nullopt;
            }
            long k = kk[j].convert_to<long>();
            E *= CoeffExpr::expt(j, (int)k);
            Einv *= CoeffExpr::expt(j, (int)-k);
        }

        // Reduced gradient g_j = exp(-k.t) f_j must be closed.
        std::map<int, CoeffExpr> g;
        for (int j : dirs) g[j] = Einv * ff[j];
        for (std::size_t a = 0; a < dirs.size(); ++a)
            for (std::size_t b = a + 1; b < dirs.size(); ++b) {
                int i = dirs[a], j = dirs[b];
                if (!(g[i].diff(j) - g[j].diff(i)).is_zero())
                    return std::nullopt;  // may resolve later; retried
            }

        // Axis-path primitive: G = sum_j int_0^{t_j} g_j(t_1..t_j, 0, ..).
        CoeffExpr G;
        for (int j : dirs) {
            CoeffExpr gj = g[j];
            for (int l = j + 1; l <= ntimes; ++l) gj = gj.at_time_zero_dir(l);
            CoeffExpr F = gj.integrate(j);
            G += F - F.at_time_zero_dir(j);
        }

        CoeffExpr c0 = u.const_sym ? CoeffExpr::sym(*u.const_sym) : CoeffExpr();
        return E * (G + c0);
    }

    /// Exact linear solve of the remaining (gauge-underdetermined) system by
    /// expanding each tail over time monomials times exponential signatures.
    template <class FamilyOf, class Record>
    bool ansatz_solve(const std::vector<const Unknown*>& tails,
                      const std::vector<CoeffExpr>& eqs, FamilyOf family_of,
                      Record record, SolveOutcome& out) const {
        // Any equation still involving a non-tail unknown is fatal here.
        std::set<int> tail_ids;
        for (const Unknown* u : tails) tail_ids.insert(u->id);
        for (const auto& e : eqs)
            for (int f : family_of(e))
                if (!tail_ids.count(f)) {
                    out.message = "non-gauge unknown stuck: " + symtab().name(f);
                    return false;
                }

        // Basis: exponential signatures seen in the equations, and all time
        // monomials up to the seen total degree plus a margin.
        std::set<std::vector<int>> sigs;
        sigs.insert({});
        int maxdeg = 0;
        for (const auto& e : eqs)
            for (const auto& [m, c] : e.terms) {
                (void)c;
                sigs.insert(m.ep);
                int d = 0;
                for (int v : m.tp) d += v;
                maxdeg = std::max(maxdeg, d);
            }
        int D = maxdeg + 2;
        std::vector<std::vector<int>> monos;
        std::vector<int> cur(ntimes, 0);
        build_monos(0, D, cur, monos);

        // Column variables x[(tail, sig, mono)], in deterministic order.
        struct Col {
            int tail_idx;
            std::vector<int> sig, mono;
        };
        std::vector<Col> cols;
        std::map<int, CoeffExpr> candidate;  // tail id -> sum x * basis
        std::vector<int> xsyms;
        for (std::size_t ti = 0; ti < tails.size(); ++ti) {
            CoeffExpr cand;
            for (const auto& sig : sigs)
                for (const auto& mono : monos) {
                    int xid = symtab().ensure(
                        "x#" + std::to_string(ti) + "." +
                        std::to_string(cols.size()));
                    cols.push_back(Col{(int)ti, sig, mono});
                    xsyms.push_back(xid);
                    CoeffExpr basis = CoeffExpr::one();
                    for (int j = 1; j <= ntimes; ++j) {
                        int tp = (int)mono.size() >= j ? mono[j - 1] : 0;
                        int ep = (int)sig.size() >= j ? sig[j - 1] : 0;
                        if (tp) basis *= CoeffExpr::t(j, tp);
                        if (ep) basis *= CoeffExpr::expt(j, ep);
                    }
                    cand += CoeffExpr::sym(xid) * basis;
                }
            candidate[tails[ti]->id] = cand;
        }

        // Substitute candidates (and their derivatives) into the equations,
        // then split by (time monomial, signature) slots into linear rows.
        std::map<int, CoeffExpr> sub;
        for (const auto& [id, cand] : candidate) {
            sub.emplace(id, cand);
            for (int j = 1; j <= ntimes; ++j)
                if (symtab().may_depend(id, j)) {
                    CoeffExpr d;
                    // Differentiate the candidate directly: x's are plain
                    // parameters, so only the basis factors differentiate.
                    d = cand.diff(j);
                    sub.emplace(symtab().deriv(id, j), d);
                }
        }
        std::map<int, std::size_t> colof;
        for (std::size_t c = 0; c < xsyms.size(); ++c) colof[xsyms[c]] = c;

        struct Row {
            std::map<std::size_t, Rational> a;
            CoeffExpr rhs;  // row reads: sum a_c x_c + rhs = 0
        };
        // One row per (equation, time monomial, signature): slots from
        // different equations are distinct constraints and must not merge.
        std::map<std::tuple<std::size_t, std::vector<int>, std::vector<int>>,
                 Row>
            rows;
        for (std::size_t ei = 0; ei < eqs.size(); ++ei) {
            CoeffExpr s = eqs[ei].subst_syms(sub);
            for (const auto& [m, c] : s.terms) {
                std::size_t col = SIZE_MAX;
                Mono mm = m;
                for (std::size_t i = 0; i < mm.pp.size(); ++i) {
                    auto it = colof.find(mm.pp[i].first);
                    if (it == colof.end()) continue;
                    if (mm.pp[i].second != 1 || col != SIZE_MAX) {
                        out.message = "tail system is not linear";
                        return false;
                    }
                    col = it->second;
                    mm.pp.erase(mm.pp.begin() + i);
                    --i;
                }
                auto key = std::make_tuple(ei, mm.tp, mm.ep);
                Row& row = rows[key];
                if (col == SIZE_MAX) {
                    Mono rest = mm;
                    rest.tp.clear();
                    rest.ep.clear();
                    CoeffExpr add;
                    add.add_term(rest, c);
                    row.rhs += add;
                } else {
                    if (!mm.pp.empty()) {
                        out.message = "tail coefficient carries parameters";
                        return false;
                    }
                    row.a[col] += c;
                    if (row.a[col] == 0) row.a.erase(col);
                }
            }
        }

        // Row-driven elimination, pivoting each row on its highest column so
        // that low-order (constant) coefficients stay free.
        std::map<std::size_t, Row> pivots;  // column -> normalized row
        for (auto& [key, row] : rows) {
            (void)key;
            Row r = row;
            bool reduced = true;
            while (reduced) {
                reduced = false;
                for (auto it = r.a.rbegin(); it != r.a.rend(); ++it) {
                    auto pit = pivots.find(it->first);
                    if (pit == pivots.end()) continue;
                    Rational f = it->second;
                    for (const auto& [c2, v2] : pit->second.a) {
                        r.a[c2] -= f * v2;
                        if (r.a[c2] == 0) r.a.erase(c2);
                    }
                    r.rhs -= pit->second.rhs * f;
                    reduced = true;
                    break;
                }
            }
            if (r.a.empty()) {
                if (!r.rhs.is_zero()) {
                    out.message = "tail system inconsistent: " + r.rhs.str();
                    return false;
                }
                continue;
            }
            std::size_t pc = r.a.rbegin()->first;
            Rational pv = r.a.rbegin()->second;
            for (auto& [c2, v2] : r.a) v2 /= pv;
            r.rhs = r.rhs * (Rational(1) / pv);
            // Eliminate the new pivot from existing pivot rows.
            for (auto& [c2, prow] : pivots) {
                (void)c2;
                auto hit = prow.a.find(pc);
                if (hit == prow.a.end()) continue;
                Rational f = hit->second;
                for (const auto& [c3, v3] : r.a) {
                    prow.a[c3] -= f * v3;
                    if (prow.a[c3] == 0) prow.a.erase(c3);
                }
                prow.rhs -= r.rhs * f;
            }
            pivots.emplace(pc, std::move(r));
        }

        // Assign free columns: zero, except a free constant term which takes
        // the tail's named integration constant.
        std::vector<CoeffExpr> xval(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (pivots.count(c)) continue;
            const Col& col = cols[c];
            bool is_const = true;
            for (int v : col.sig) is_const = is_const && v == 0;
            for (int v : col.mono) is_const = is_const && v == 0;
            const Unknown* u = tails[col.tail_idx];
            if (is_const && u->const_sym)
                xval[c] = CoeffExpr::sym(*u->const_sym);
            else
                xval[c] = CoeffExpr();
        }
        for (auto& [pc, prow] : pivots) {
            CoeffExpr v = -prow.rhs;
            for (const auto& [c2, v2] : prow.a)
                if (c2 != pc && !xval[c2].is_zero()) v -= xval[c2] * v2;
            xval[pc] = v;
        }

        // Assemble and record the tail functions.
        for (std::size_t ti = 0; ti < tails.size(); ++ti) {
            CoeffExpr f;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (cols[c].tail_idx != (int)ti || xval[c].is_zero()) continue;
                CoeffExpr basis = CoeffExpr::one();
                for (int j = 1; j <= ntimes; ++j) {
                    int tp = (int)cols[c].mono.size() >= j ? cols[c].mono[j - 1] : 0;
                    int ep = (int)cols[c].sig.size() >= j ? cols[c].sig[j - 1] : 0;
                    if (tp) basis *= CoeffExpr::t(j, tp);
                    if (ep) basis *= CoeffExpr::expt(j, ep);
                }
                f += xval[c] * basis;
            }
            record(tails[ti]->id, f);
        }
        return true;
    }

    static void build_monos(int pos, int degleft, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
        if (pos == (int)cur.size()) {
            out.push_back(cur);
            return;
        }
        for (int d = 0; d <= degleft; ++d) {
            cur[pos] = d;
            build_monos(pos + 1, degleft - d, cur, out);
        }
        cur[pos] = 0;
    }

};

/// Flatten a phase-space residual into per-monomial coefficient equations.
template <class Phase>
std::vector<CoeffExpr> monomial_equations(const Phase& residual) {
    std::vector<CoeffExpr> out;
    for (const auto& [m, c] : residual.terms) {
        (void)m;
        if (!c.is_zero()) out.push_back(c);
    }
    return out;
}

} // namespace viete
