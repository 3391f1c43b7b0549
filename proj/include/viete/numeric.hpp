#pragma once
// Numerical side of the story: compile phase-space expressions into flat
// evaluation tapes, integrate the (generally non-autonomous) Hamilton
// equations of any member with classical fourth-order Runge-Kutta along any
// of the time directions, and measure how far composed flows are from
// commuting.  For a compatible family the flows commute exactly, so the
// endpoint discrepancy between different axis orderings is pure integration
// error; for an incompatible collection it converges to a nonzero number.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "viete/phase.hpp"

namespace viete {

// ------------------------------------------------------------------- tapes

/// One compiled monomial c * prod q^e * prod p^e * prod t^e * exp(k t).
struct TapeTerm {
    double c = 0;
    std::vector<std::pair<int, int>> q;    ///< (position index 0-based, power)
    std::vector<std::pair<int, int>> p;    ///< (momentum index, power)
    std::vector<std::pair<int, int>> t;    ///< (time index, power)
    std::vector<std::pair<int, int>> e;    ///< (time index, exponential weight)
};

namespace detail {

inline double ipow(double x, int e) {
    if (e < 0) return 1.0 / ipow(x, -e);
    double r = 1;
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// A sum of compiled monomials, evaluated at concrete (q, p, t).
class Tape {
public:
    int n = 0;
    std::vector<TapeTerm> terms;

    double eval(const double* q, const double* p, const double* t) const {
        double sum = 0;
        for (const TapeTerm& m : terms) {
            double v = m.c;
            for (auto [i, e] : m.q) v *= detail::ipow(q[i], e);
            for (auto [i, e] : m.p) v *= detail::ipow(p[i], e);
            for (auto [i, e] : m.t) v *= detail::ipow(t[i], e);
            for (auto [i, k] : m.e) v *= std::exp(k * t[i]);
            sum += v;
        }
        return sum;
    }
};

/// Flatten an expression with all parameters bound to numbers.  Unbound
/// symbols (by id) raise; unresolved functions of time raise.
inline Tape compile_tape(const PhaseExpr& f,
                         const std::map<int, double>& params = {}) {
    Tape tape;
    tape.n = f.n;
    for (const auto& [pm, c] : f.terms) {
        for (const auto& [cm, r] : c.terms) {
            TapeTerm term;
            term.c = r.convert_to<double>();
            for (int i = 0; i < f.n; ++i) {
                if (pm.q[i]) term.q.emplace_back(i, pm.q[i]);
                if (pm.p[i]) term.p.emplace_back(i, pm.p[i]);
            }
            for (std::size_t j = 0; j < cm.tp.size(); ++j)
                if (cm.tp[j]) term.t.emplace_back((int)j, cm.tp[j]);
            for (std::size_t j = 0; j < cm.ep.size(); ++j)
                if (cm.ep[j]) term.e.emplace_back((int)j, cm.ep[j]);
            for (const auto& [id, pw] : cm.pp) {
                auto it = params.find(id);
                if (it == params.end())
                    throw std::domain_error("compile_tape: unbound symbol " +
                                            symtab().name(id));
                term.c *= detail::ipow(it->second, pw);
            }
            tape.terms.push_back(std::move(term));
        }
    }
    return tape;
}

// -------------------------------------------------------------------- flow

/// A phase point together with the vector of times.
struct FlowState {
    std::vector<double> q, p, t;
};

/// Largest phase-coordinate difference (times are not compared).
inline double state_distance(const FlowState& a, const FlowState& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.q.size(); ++i) {
        d = std::max(d, std::abs(a.q[i] - b.q[i]));
        d = std::max(d, std::abs(a.p[i] - b.p[i]));
    }
    return d;
}

/// One member compiled with its 2n first partials.
struct CompiledRow {
    Tape value;
    std::vector<Tape> dq, dp;  ///< index i-1 for the i-th coordinate
};

inline CompiledRow compile_row(const PhaseExpr& H,
                               const std::map<int, double>& params = {}) {
    CompiledRow row;
    row.value = compile_tape(H, params);
    for (int i = 1; i <= H.n; ++i) {
        row.dq.push_back(compile_tape(H.diff_q(i), params));
        row.dp.push_back(compile_tape(H.diff_p(i), params));
    }
    return row;
}

/// The flows of a collection of members H_1..H_n, member r driving time t_r.
class MultiFlow {
public:
    int n = 0;
    std::vector<CompiledRow> rows;  ///< index r-1

    MultiFlow() = default;
    /// `members` holds H_1..H_n in order (0-based).
    MultiFlow(const std::vector<PhaseExpr>& members,
              const std::map<int, double>& params = {}) {
        if (members.empty())
            throw std::domain_error("MultiFlow: no members");
        n = members.front().n;
        if ((int)members.size() != n)
            throw std::domain_error("MultiFlow: need one member per time");
        for (const PhaseExpr& H : members) rows.push_back(compile_row(H, params));
    }

    double hamiltonian(const FlowState& s, int r) const {
        return rows[r - 1].value.eval(s.q.data(), s.p.data(), s.t.data());
    }

    /// One classical RK4 step of size h along direction r; advances t_r.
    void step(FlowState& s, int r, double h) const {
        const CompiledRow& row = rows[r - 1];
        const int dim = n;
        auto deriv = [&](const std::vector<double>& q,
                         const std::vector<double>& p, double tau,
                         std::vector<double>& kq, std::vector<double>& kp) {
            std::vector<double> t = s.t;
            t[r - 1] += tau;
            for (int i = 0; i < dim; ++i) {
                kq[i] = row.dp[i].eval(q.data(), p.data(), t.data());
                kp[i] = -row.dq[i].eval(q.data(), p.data(), t.data());
            }
        };
        std::vector<double> k1q(dim), k1p(dim), k2q(dim), k2p(dim);
        std::vector<double> k3q(dim), k3p(dim), k4q(dim), k4p(dim);
        std::vector<double> q(dim), p(dim);

        deriv(s.q, s.p, 0, k1q, k1p);
        for (int i = 0; i < dim; ++i) {
            q[i] = s.q[i] + 0.5 * h * k1q[i];
            p[i] = s.p[i] + 0.5 * h * k1p[i];
        }
        deriv(q, p, 0.5 * h, k2q, k2p);
        for (int i = 0; i < dim; ++i) {
            q[i] = s.q[i] + 0.5 * h * k2q[i];
            p[i] = s.p[i] + 0.5 * h * k2p[i];
        }
        deriv(q, p, 0.5 * h, k3q, k3p);
        for (int i = 0; i < dim; ++i) {
            q[i] = s.q[i] + h * k3q[i];
            p[i] = s.p[i] + h * k3p[i];
        }
        deriv(q, p, h, k4q, k4p);
        for (int i = 0; i < dim; ++i) {
            s.q[i] += h / 6 * (k1q[i] + 2 * k2q[i] + 2 * k3q[i] + k4q[i]);
            s.p[i] += h / 6 * (k1p[i] + 2 * k2p[i] + 2 * k3p[i] + k4p[i]);
        }
        s.t[r - 1] += h;
    }

    /// Flow a signed duration `delta` along direction r in steps of size h.
    void flow(FlowState& s, int r, double delta, double h) const {
        if (delta == 0) return;
        double hh = delta > 0 ? std::abs(h) : -std::abs(h);
        long steps = std::lround(delta / hh);
        if (steps < 1 || std::abs(steps * hh - delta) > 1e-12 * std::abs(delta))
            throw std::domain_error("flow: delta must be a multiple of h");
        for (long i = 0; i < steps; ++i) step(s, r, hh);
    }

    /// Apply the axis flows in the stated order.
    FlowState run(FlowState s, const std::vector<int>& order,
                  const std::vector<double>& delta, double h) const {
        for (int r : order) flow(s, r, delta[r - 1], h);
        return s;
    }
};

/// Largest endpoint distance between any two axis orderings of the same
/// multitime displacement.
inline double path_discrepancy(const MultiFlow& M, const FlowState& start,
                               const std::vector<double>& delta, double h) {
    std::vector<int> order(M.n);
    for (int r = 1; r <= M.n; ++r) order[r - 1] = r;
    std::vector<FlowState> ends;
    do {
        ends.push_back(M.run(start, order, delta, h));
    } while (std::next_permutation(order.begin(), order.end()));
    double d = 0;
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i + 1; j < ends.size(); ++j)
            d = std::max(d, state_distance(ends[i], ends[j]));
    return d;
}

/// Drift of the member's own value along its own flow (zero in exact
/// arithmetic whenever the member does not depend on its time).
inline double conservation_drift(const MultiFlow& M, FlowState s, int r,
                                 double delta, double h) {
    double before = M.hamiltonian(s, r);
    M.flow(s, r, delta, h);
    return std::abs(M.hamiltonian(s, r) - before);
}

} // namespace viete
