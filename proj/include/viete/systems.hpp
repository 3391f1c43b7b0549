/**
 * @file systems.hpp
 * @brief Generators of the Hamiltonian families: benchmark metrics indexed by
 *        (n, m), their Killing tensors, momentum-linear vector parts, and the
 *        two towers of potentials (position-only and momentum-linear).
 *
 * Everything is produced in coordinates (q_1..q_n, p_1..p_n) where the q_i
 * are elementary-symmetric functions of the metric's separation variables.
 * Out-of-range symbols follow one global convention: q_0 = 1 and q_k = 0 for
 * k < 0 or k > n; likewise any generator with an index outside 1..n is zero.
 */
#pragma once

#include "phase.hpp"

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace viete {

// ----------------------------------------------------------------- indexing

/// Splitting of the row indices 1..n for a family with parameter m.
struct IndexSets {
    int n = 0, m = 0;
    int i1_lo = 0, i1_hi = 0;   ///< first block: 2..min(n-m+1, n) (empty if lo > hi)
    int i2_lo = 0, i2_hi = 0;   ///< second block: max(2, n-m+2)..n
    int kappa1 = 0;             ///< rows 1..kappa1 stay undeformed
    int kappa2 = 0;             ///< rows n-kappa2+1..n stay undeformed

    bool in_i1(int r) const { return r >= i1_lo && r <= i1_hi; }
    bool in_i2(int r) const { return r >= i2_lo && r <= i2_hi; }
    bool deformed(int r) const {
        return (in_i1(r) && r > kappa1) || (in_i2(r) && r <= n - kappa2);
    }
    std::vector<int> deformed_rows() const {
        std::vector<int> out;
        for (int r = 1; r <= n; ++r)
            if (deformed(r)) out.push_back(r);
        return out;
    }
};

inline IndexSets index_sets(int n, int m) {
    if (n < 1 || m < 0 || m > n + 1)
        throw std::invalid_argument("index_sets: need n >= 1, 0 <= m <= n+1");
    IndexSets s;
    s.n = n;
    s.m = m;
    s.i1_lo = 2;
    s.i1_hi = std::min(n - m + 1, n);
    s.i2_lo = std::max(2, n - m + 2);
    s.i2_hi = n;
    s.kappa1 = std::min((n + 3 - m) / 2, n);
    s.kappa2 = m / 2;
    return s;
}

// ------------------------------------------------------------ basic helpers

/// q_k with the out-of-range convention (q_0 = 1, else 0 outside 1..n).
inline PhaseExpr qv(int n, int k) {
    if (k == 0) return PhaseExpr::constant(n, Rational(1));
    if (k < 0 || k > n) return PhaseExpr::zero(n);
    return PhaseExpr::qvar(n, k);
}

using PhaseMatrix = std::vector<std::vector<PhaseExpr>>;

// ------------------------------------------------------------------- metric

/// Contravariant metric G of the (n, m) family, as an n x n matrix in q.
inline PhaseMatrix metric(int n, int m) {
    index_sets(n, m);  // validates the range
    PhaseMatrix G(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(n)));
    if (m == n + 1) {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
                G[i - 1][j - 1] = qv(n, i) * qv(n, j) - qv(n, i + j);
        return G;
    }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i <= n - m && j <= n - m)
                G[i - 1][j - 1] = qv(n, i + j + m - n - 1);
            else if (i >= n - m + 1 && j >= n - m + 1)
                G[i - 1][j - 1] = -qv(n, i + j + m - n - 1);
        }
    return G;
}

/// r-th Killing tensor K_r of the family (K_1 = identity).
inline PhaseMatrix killing(int n, int r) {
    if (r < 1 || r > n) throw std::invalid_argument("killing: r out of range");
    PhaseMatrix K(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(n)));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i <= j && r <= j)
                K[i - 1][j - 1] = qv(n, i - j + r - 1);
            else if (i > j && r > j)
                K[i - 1][j - 1] = -qv(n, i - j + r - 1);
        }
    return K;
}

/// Quadratic-in-momenta part: E_r = 1/2 p^T (K_r G) p.
inline PhaseExpr geodesic_E(int n, int m, int r) {
    PhaseMatrix G = metric(n, m), K = killing(n, r);
    PhaseMatrix A(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) A[i][j] += K[i][k] * G[k][j];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!(A[i][j] - A[j][i]).is_zero())
                throw std::logic_error("geodesic_E: K_r G not symmetric");
    PhaseExpr E(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            E += Rational(1, 2) * A[i - 1][j - 1] * PhaseExpr::pvar(n, i) *
                 PhaseExpr::pvar(n, j);
    return E;
}

/// Momentum-linear part W_r coming from the family's Killing vectors.
inline PhaseExpr quasi_W(int n, int m, int r) {
    IndexSets s = index_sets(n, m);
    PhaseExpr W(n);
    if (s.in_i1(r)) {
        for (int k = n - m - r + 2; k <= n - m; ++k)
            W += Rational(n + 1 - m - k) * qv(n, m + r - n - 2 + k) *
                 PhaseExpr::pvar(n, k);
    } else if (s.in_i2(r)) {
        for (int k = n - m + 2; k <= 2 * n - m + 2 - r; ++k)
            W -= Rational(n + 1 - m - k) * qv(n, m + r - n - 2 + k) *
                 PhaseExpr::pvar(n, k);
    }
    return W;
}

/// Full quasi-Stackel generator:  E_r(q,p) + W_r(q,p)  (zero outside 1..n).
inline PhaseExpr generator_E(int n, int m, int r) {
    if (r < 1 || r > n) return PhaseExpr::zero(n);
    return geodesic_E(n, m, r) + quasi_W(n, m, r);
}

// --------------------------------------------------------------- potentials

namespace detail {

inline std::vector<PhaseExpr> raise_V(int n, const std::vector<PhaseExpr>& V) {
    std::vector<PhaseExpr> out(n, PhaseExpr::zero(n));
    for (int i = 1; i <= n; ++i) {
        out[i - 1] = PhaseExpr::zero(n) - qv(n, i) * V[0];
        if (i < n) out[i - 1] += V[i];
    }
    return out;
}

inline std::vector<PhaseExpr> lower_V(int n, const std::vector<PhaseExpr>& V) {
    // Inverse of raise_V; divides by q_n (Laurent in q_n only).
    std::vector<PhaseExpr> out(n, PhaseExpr::zero(n));
    PhaseExpr qn_inv = PhaseExpr::qvar(n, n, -1);
    PhaseExpr Vn_over_qn = V[n - 1] * qn_inv;
    out[0] = PhaseExpr::zero(n) - Vn_over_qn;
    for (int r = 2; r <= n; ++r)
        out[r - 1] = V[r - 2] - qv(n, r - 1) * Vn_over_qn;
    return out;
}

} // namespace detail

/// Basic potential column V^{(alpha)} = (V_1, ..., V_n), any integer alpha.
/// V^{(0)} = (0,...,0,-1); raising by one multiplies the defining weight by
/// the spectral variable, lowering divides by it (hence the q_n Laurent tail
/// for alpha < 0).  Results are cached per (n, alpha).
inline const std::vector<PhaseExpr>& potential_V(int n, int alpha) {
    static std::map<std::pair<int, int>, std::vector<PhaseExpr>> cache;
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<PhaseExpr> V;
    if (alpha == 0) {
        V.assign(n, PhaseExpr::zero(n));
        V[n - 1] = PhaseExpr::constant(n, Rational(-1));
    } else if (alpha > 0) {
        V = detail::raise_V(n, potential_V(n, alpha - 1));
    } else {
        V = detail::lower_V(n, potential_V(n, alpha + 1));
    }
    return cache.emplace(key, std::move(V)).first->second;
}

/// Momentum-linear potential M_r^{(gamma)}; r outside 1..n gives zero.
inline PhaseExpr potential_M(int n, int r, int gamma) {
    if (r < 1 || r > n) return PhaseExpr::zero(n);
    PhaseExpr M(n);
    for (int j = 1; j <= n; ++j) {
        PhaseExpr coef(n);
        for (int s = 0; s <= r - 1; ++s)
            coef += qv(n, s) * potential_V(n, r + gamma - s - 1)[j - 1];
        M -= coef * PhaseExpr::pvar(n, j);
    }
    return M;
}

// ----------------------------------------------------------------- assembly

/// Description of one Hamiltonian family member h_r before deformation.
struct SystemSpec {
    int n = 1;
    int m = 0;
    bool magnetic = false;
    /// alpha -> coefficient (ordinary), or gamma -> coefficient (magnetic).
    std::map<int, CoeffExpr> coeffs;
    /// Extra multiplier of V^{(n)} on the magnetic side (zero if unused).
    CoeffExpr e_coeff;
};

/// h_r = E_r + W_r + sum_alpha c_alpha V_r^{(alpha)}           (ordinary)
/// h_r = E_r + W_r + sum_gamma d_gamma M_r^{(gamma)} + e V_r^{(n)} (magnetic)
inline PhaseExpr assemble(const SystemSpec& spec, int r) {
    PhaseExpr h = generator_E(spec.n, spec.m, r);
    for (const auto& [idx, c] : spec.coeffs) {
        if (c.is_zero()) continue;
        if (spec.magnetic)
            h += c * potential_M(spec.n, r, idx);
        else
            h += c * potential_V(spec.n, idx)[r - 1];
    }
    if (!spec.e_coeff.is_zero())
        h += spec.e_coeff * potential_V(spec.n, spec.n)[r - 1];
    return h;
}

// ------------------------------------------------------------- power sums

/// Power sums of the separation variables expressed through q_1..q_n:
/// Newton's recursion downward for k > 0, reciprocal-root form for k < 0
/// (Laurent in q_n).  Z_0 = n.
inline const PhaseExpr& power_sum(int n, int k) {
    static std::map<std::pair<int, int>, PhaseExpr> cache;
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PhaseExpr Z(n);
    if (k == 0) {
        Z = PhaseExpr::constant(n, Rational(n));
    } else if (k > 0) {
        Z = Rational(-k) * qv(n, k);
        for (int i = 1; i <= k - 1; ++i) Z -= qv(n, i) * power_sum(n, k - i);
    } else {
        // Roots of the reciprocal polynomial are the inverse separation
        // variables; their k-th power sums use q~_i = q_{n-i}/q_n.
        int kk = -k;
        PhaseExpr qn_inv = PhaseExpr::qvar(n, n, -1);
        auto qt = [&](int i) { return qv(n, n - i) * qn_inv; };
        // Newton again, with coefficients q~.
        std::vector<PhaseExpr> Zt(kk + 1, PhaseExpr::zero(n));
        Zt[0] = PhaseExpr::constant(n, Rational(n));
        for (int j = 1; j <= kk; ++j) {
            PhaseExpr acc = Rational(-j) * qt(j);
            for (int i = 1; i <= j - 1; ++i) acc -= qt(i) * Zt[j - i];
            Zt[j] = acc;
        }
        Z = Zt[kk];
    }
    return cache.emplace(key, std::move(Z)).first->second;
}

} // namespace viete
