/**
 * @file deform.hpp
 * @brief Non-autonomous deformations of the Hamiltonian families and the
 *        zero-curvature (Frobenius) certification of the result.
 *
 * A family h_1..h_n acquires explicit time dependence in two steps:
 *
 *   1. rows outside the two stable bands are replaced by combinations
 *      H_r = sum_j zeta_{r,j}(t) h_j with unit diagonal, where the mixing
 *      functions zeta are determined from the momentum-quadratic part alone;
 *   2. the potential coefficients become functions of the times, determined
 *      by dH_r/dt_s - dH_s/dt_r + {H_r, H_s} = 0 for all pairs (r, s).
 *
 * The phase-independent components of those equations constrain the
 * constant-potential coefficients ("tails") only up to gauge; the solver
 * zeroes the lowest free ones by default, or accepts named presets.
 */
#pragma once

#include "solve.hpp"
#include "systems.hpp"

#include <map>
#include <string>
#include <vector>

namespace viete {

// ----------------------------------------------------------- result object

struct DeformedSystem {
    int n = 1, m = 0;
    bool magnetic = false;
    /// Mixing functions: (r, j) -> zeta_{r,j}(t), including the unit diagonal.
    std::map<std::pair<int, int>, CoeffExpr> zeta;
    /// Solved coefficient functions: alpha (ordinary) or gamma (magnetic).
    std::map<int, CoeffExpr> funcs;
    /// Members h_r with the solved coefficients substituted.
    std::vector<PhaseExpr> members;
    /// Deformed rows H_r = sum_j zeta_{r,j} h_j.
    std::vector<PhaseExpr> rows;
    /// Multiplier of V^{(n)} on the magnetic side (zero for ordinary).
    CoeffExpr e_func;
};

/// The dynamical coefficient indices of the ordinary family (the remaining
/// indices 0..n-1 are tails fixed only up to gauge).
inline std::vector<int> ordinary_dynamic_indices(int n, int m) {
    std::vector<int> out;
    for (int k = -m; k <= -1; ++k) out.push_back(k);
    for (int k = n; k <= 2 * n - m + 2; ++k) out.push_back(k);
    return out;
}

inline std::vector<int> ordinary_tail_indices(int n) {
    std::vector<int> out;
    for (int k = 0; k <= n - 1; ++k) out.push_back(k);
    return out;
}

inline std::vector<int> magnetic_indices(int n) {
    std::vector<int> out;
    for (int k = 0; k <= n + 1; ++k) out.push_back(k);
    return out;
}

namespace detail {

inline std::string zeta_name(int r, int j) {
    return "zeta[" + std::to_string(r) + "," + std::to_string(j) + "]";
}

inline std::string func_name(bool magnetic, int idx) {
    return (magnetic ? std::string("D[") : std::string("C[")) +
           std::to_string(idx) + "]";
}

inline std::string const_name(bool magnetic, int idx) {
    return (magnetic ? std::string("b_") : std::string("a_")) +
           std::to_string(idx);
}

} // namespace detail

// -------------------------------------------------------------- zeta stage

/// Determine the mixing functions from the momentum-quadratic generators.
/// Integration constants are zero, so undeformed rows keep zeta = delta.
inline std::map<std::pair<int, int>, CoeffExpr> solve_zeta(int n, int m) {
    IndexSets s = index_sets(n, m);

    // Unknowns with their allowed directions.
    PdeSolver solver;
    solver.ntimes = n;
    std::map<std::pair<int, int>, int> zsym;
    for (int r : s.deformed_rows()) {
        if (s.in_i1(r)) {
            std::uint64_t mask = 0;
            for (int j = 1; j <= r - 1; ++j) mask |= 1ull << (j - 1);
            for (int j = 1; j <= r - 1; ++j) {
                int id = symtab().ensure(detail::zeta_name(r, j) + "#" +
                                             std::to_string(n) + "." +
                                             std::to_string(m),
                                         true, mask);
                zsym[{r, j}] = id;
                solver.unknowns.push_back(Unknown{id, std::nullopt, false, 0});
            }
        } else {
            std::uint64_t mask = 0;
            for (int j = r + 1; j <= n; ++j) mask |= 1ull << (j - 1);
            for (int j = r + 1; j <= n; ++j) {
                int id = symtab().ensure(detail::zeta_name(r, j) + "#" +
                                             std::to_string(n) + "." +
                                             std::to_string(m),
                                         true, mask);
                zsym[{r, j}] = id;
                solver.unknowns.push_back(Unknown{id, std::nullopt, false, 0});
            }
        }
    }

    // Rows built from the quadratic generators only.
    std::vector<PhaseExpr> rows(n + 1, PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r) {
        PhaseExpr H = generator_E(n, m, r);
        for (const auto& [key, id] : zsym)
            if (key.first == r)
                H += CoeffExpr::sym(id) * generator_E(n, m, key.second);
        rows[r] = H;
    }

    std::vector<CoeffExpr> eqs;
    for (int r = 1; r <= n; ++r)
        for (int ss = r + 1; ss <= n; ++ss) {
            PhaseExpr res =
                rows[r].diff_t(ss) - rows[ss].diff_t(r) + pb(rows[r], rows[ss]);
            for (auto& e : monomial_equations(res)) eqs.push_back(e);
        }

    SolveOutcome oc = solver.run(eqs);
    if (!oc.ok)
        throw std::runtime_error("solve_zeta(" + std::to_string(n) + "," +
                                 std::to_string(m) + "): " + oc.message);

    std::map<std::pair<int, int>, CoeffExpr> zeta;
    for (int r = 1; r <= n; ++r) zeta[{r, r}] = CoeffExpr::one();
    for (const auto& [key, id] : zsym) zeta[key] = oc.solution.at(id);
    return zeta;
}

// -------------------------------------------------------------- full solve

struct DeformOptions {
    /// Gauge presets for tail functions: alpha -> function of the times.
    std::map<int, CoeffExpr> tail_presets;
};

/// Construct the non-autonomous family for (n, m), ordinary or magnetic.
inline DeformedSystem solve_deformation(int n, int m, bool magnetic,
                                        const DeformOptions& opt = {}) {
    IndexSets s = index_sets(n, m);
    DeformedSystem sys;
    sys.n = n;
    sys.m = m;
    sys.magnetic = magnetic;
    sys.zeta = solve_zeta(n, m);

    // Unknown coefficient functions.
    PdeSolver solver;
    solver.ntimes = n;
    std::map<int, int> fsym;  // index -> unknown symbol
    std::string tag = "#" + std::to_string(n) + "." + std::to_string(m) +
                      (magnetic ? "B" : "A");
    auto add_unknown = [&](int idx, bool tail) {
        int id = symtab().ensure(detail::func_name(magnetic, idx) + tag, true);
        int cs = symtab().ensure(detail::const_name(magnetic, idx));
        fsym[idx] = id;
        solver.unknowns.push_back(Unknown{id, cs, tail, idx});
    };
    int esym = -1;
    if (magnetic) {
        for (int g : magnetic_indices(n)) add_unknown(g, false);
        esym = symtab().ensure("e" + tag, true);
        int cs = symtab().ensure("bbar");
        solver.unknowns.push_back(Unknown{esym, cs, false, 0});
    } else {
        for (int a : ordinary_dynamic_indices(n, m)) add_unknown(a, false);
        for (int a : ordinary_tail_indices(n)) add_unknown(a, true);
    }
    for (const auto& [idx, f] : opt.tail_presets)
        solver.presets.emplace(fsym.at(idx), f);

    // Members with symbolic coefficients, then deformed rows.
    SystemSpec spec;
    spec.n = n;
    spec.m = m;
    spec.magnetic = magnetic;
    for (const auto& [idx, id] : fsym) spec.coeffs[idx] = CoeffExpr::sym(id);
    if (magnetic) spec.e_coeff = CoeffExpr::sym(esym);
    std::vector<PhaseExpr> members(n + 1, PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r) members[r] = assemble(spec, r);
    std::vector<PhaseExpr> rows(n + 1, PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r) {
        PhaseExpr H(n);
        for (int j = 1; j <= n; ++j) {
            auto it = sys.zeta.find({r, j});
            if (it != sys.zeta.end() && !it->second.is_zero())
                H += it->second * members[j];
        }
        rows[r] = H;
    }

    // Magnetic members carry no pure-time tail functions, so their
    // zero-curvature residual is only required to vanish up to a function of
    // time: the constant phase monomial is exempt.  (The canonical map to the
    // ordinary side restores exactness through that side's tails.)
    auto exempt = [&](const PhaseMono& mono) {
        if (!magnetic) return false;
        for (int v : mono.q)
            if (v) return false;
        for (int v : mono.p)
            if (v) return false;
        return true;
    };

    std::vector<CoeffExpr> eqs;
    for (int r = 1; r <= n; ++r)
        for (int ss = r + 1; ss <= n; ++ss) {
            PhaseExpr res =
                rows[r].diff_t(ss) - rows[ss].diff_t(r) + pb(rows[r], rows[ss]);
            for (const auto& [mono, c] : res.terms) {
                if (c.is_zero() || exempt(mono)) continue;
                eqs.push_back(c);
                std::string lab = "pair(" + std::to_string(r) + "," +
                                  std::to_string(ss) + ") @";
                for (int i = 0; i < n; ++i) {
                    if (mono.q[i])
                        lab += " q" + std::to_string(i + 1) + "^" +
                               std::to_string(mono.q[i]);
                    if (mono.p[i])
                        lab += " p" + std::to_string(i + 1) + "^" +
                               std::to_string(mono.p[i]);
                }
                solver.labels.push_back(lab);
            }
        }

    SolveOutcome oc = solver.run(eqs);
    if (!oc.ok)
        throw std::runtime_error("solve_deformation(" + std::to_string(n) + "," +
                                 std::to_string(m) + "," +
                                 (magnetic ? "B" : "A") + "): " + oc.message);

    std::map<int, CoeffExpr> sub;
    for (const auto& [idx, id] : fsym) {
        sys.funcs[idx] = oc.solution.at(id);
        sub[id] = oc.solution.at(id);
    }
    if (magnetic) {
        sys.e_func = oc.solution.at(esym);
        sub[esym] = sys.e_func;
    }
    sys.members.assign(n + 1, PhaseExpr::zero(n));
    sys.rows.assign(n + 1, PhaseExpr::zero(n));
    for (int r = 1; r <= n; ++r) {
        sys.members[r] = members[r].subst_syms(sub);
        sys.rows[r] = rows[r].subst_syms(sub);
    }
    (void)s;
    return sys;
}

// ------------------------------------------------------------ certification

struct PairResidual {
    int r = 0, s = 0;
    bool zero = false;             ///< residual vanishes identically
    bool phase_independent = false;///< residual is a pure function of time
    PhaseExpr residual;
};

struct CertifyReport {
    bool exact = true;        ///< all residuals identically zero
    bool weak = true;         ///< all residuals phase-independent
    std::vector<PairResidual> pairs;
};

/// Zero-curvature check of a list of rows H_1..H_n (index 0 unused).
inline CertifyReport certify_rows(const std::vector<PhaseExpr>& rows, int n) {
    CertifyReport rep;
    for (int r = 1; r <= n; ++r)
        for (int s = r + 1; s <= n; ++s) {
            PairResidual pr;
            pr.r = r;
            pr.s = s;
            pr.residual =
                rows[r].diff_t(s) - rows[s].diff_t(r) + pb(rows[r], rows[s]);
            pr.zero = pr.residual.is_zero();
            pr.phase_independent = pr.residual.is_phase_constant();
            rep.exact = rep.exact && pr.zero;
            rep.weak = rep.weak && pr.phase_independent;
            rep.pairs.push_back(std::move(pr));
        }
    return rep;
}

inline CertifyReport certify(const DeformedSystem& sys) {
    return certify_rows(sys.rows, sys.n);
}

} // namespace viete
