// Phase-space algebra: the bracket's defining identities on randomized
// expressions, the sign conventions, and the canonical pairings.
#include "catch2/catch_amalgamated.hpp"

#include <viete/io.hpp>
#include <viete/phase.hpp>

#include <random>

using namespace viete;

namespace {

struct Gen {
    std::mt19937 rng{77};
    int n;
    explicit Gen(int dim) : n(dim) {}

    int pick(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }

    Rational rat() { return Rational(pick(-5, 5)) / Rational(pick(1, 3)); }

    PhaseExpr atom() {
        switch (pick(0, 4)) {
            case 0: return PhaseExpr::qvar(n, pick(1, n));
            case 1: return PhaseExpr::pvar(n, pick(1, n));
            case 2: return PhaseExpr::qvar(n, n, -1);  // Laurent tail
            case 3: return PhaseExpr::constant(n, CoeffExpr::t(pick(1, n)));
            default: return PhaseExpr::constant(n, rat());
        }
    }

    PhaseExpr expr() {
        PhaseExpr sum = PhaseExpr::zero(n);
        int nterms = pick(1, 3);
        for (int i = 0; i < nterms; ++i) {
            PhaseExpr prod = PhaseExpr::constant(n, rat());
            int nfac = pick(1, 3);
            for (int f = 0; f < nfac; ++f) prod = prod * atom();
            sum = sum + prod;
        }
        return sum;
    }
};

} // namespace

TEST_CASE("canonical pairings fix the sign convention") {
    int n = 3;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            PhaseExpr qi = PhaseExpr::qvar(n, i), pj = PhaseExpr::pvar(n, j);
            PhaseExpr expect = i == j ? PhaseExpr::constant(n, Rational(1))
                                      : PhaseExpr::zero(n);
            CHECK(pb(qi, pj) == expect);
            CHECK(pb(pj, qi) == -expect);
            CHECK(pb(qi, PhaseExpr::qvar(n, j)).terms.empty());
            CHECK(pb(PhaseExpr::pvar(n, i), pj).terms.empty());
        }
    // flows read positions forward: d q_i / dt = +dH/dp_i under qdot = {q, H}
    PhaseExpr H = PhaseExpr::pvar(n, 1, 2) * Rational(1, 2);
    CHECK(pb(PhaseExpr::qvar(n, 1), H) == PhaseExpr::pvar(n, 1));
}

TEST_CASE("bracket identities hold on randomized triples") {
    Gen g(3);
    int triples = 0;
    for (int i = 0; i < 70; ++i) {
        PhaseExpr a = g.expr(), b = g.expr(), c = g.expr();
        // antisymmetry
        CHECK(pb(a, b) == -pb(b, a));
        // bilinearity
        CHECK(pb(a + b, c) == pb(a, c) + pb(b, c));
        // Leibniz in the second slot
        CHECK(pb(a, b * c) == pb(a, b) * c + b * pb(a, c));
        // Jacobi
        PhaseExpr jac =
            pb(a, pb(b, c)) + pb(b, pb(c, a)) + pb(c, pb(a, b));
        CHECK(jac.terms.empty());
        ++triples;
    }
    // two degrees of freedom as well, including Laurent powers
    Gen g2(2);
    for (int i = 0; i < 140; ++i) {
        PhaseExpr a = g2.expr(), b = g2.expr(), c = g2.expr();
        CHECK(pb(a, b) == -pb(b, a));
        PhaseExpr jac =
            pb(a, pb(b, c)) + pb(b, pb(c, a)) + pb(c, pb(a, b));
        CHECK(jac.terms.empty());
        ++triples;
    }
    REQUIRE(triples >= 200);
}

TEST_CASE("partial derivatives follow the expected calculus") {
    Gen g(2);
    for (int i = 0; i < 40; ++i) {
        PhaseExpr a = g.expr(), b = g.expr();
        for (int k = 1; k <= 2; ++k) {
            CHECK((a * b).diff_q(k) ==
                  a.diff_q(k) * b + a * b.diff_q(k));
            CHECK((a * b).diff_p(k) ==
                  a.diff_p(k) * b + a * b.diff_p(k));
            CHECK((a + b).diff_t(k) == a.diff_t(k) + b.diff_t(k));
        }
        CHECK(a.diff_q(1).diff_p(2) == a.diff_p(2).diff_q(1));
    }
    // Laurent powers differentiate with the negative exponent
    PhaseExpr qm = PhaseExpr::qvar(2, 2, -1);
    CHECK(qm.diff_q(2) == PhaseExpr::qvar(2, 2, -2) * Rational(-1));
}

TEST_CASE("time-dependent coefficients pass through the bracket untouched") {
    int n = 2;
    CoeffExpr c = CoeffExpr::t(1, 2) * CoeffExpr::t(2);
    PhaseExpr f = PhaseExpr::qvar(n, 1) * c;
    PhaseExpr h = PhaseExpr::pvar(n, 1, 2) * Rational(1, 2);
    CHECK(pb(f, h) == PhaseExpr::pvar(n, 1) * c);
    CHECK(f.diff_t(1) == PhaseExpr::qvar(n, 1) * c.diff(1));
    CHECK(f.diff_t(2) == PhaseExpr::qvar(n, 1) * c.diff(2));
}

TEST_CASE("momentum substitution is a ring map on momentum polynomials") {
    int n = 2;
    // p_i -> p_i + s_i(q) stays polynomial and composes with products
    std::vector<PhaseExpr> repl;
    for (int i = 1; i <= n; ++i)
        repl.push_back(PhaseExpr::pvar(n, i) +
                       PhaseExpr::qvar(n, i, 2) * Rational(3));
    Gen g(2);
    for (int i = 0; i < 30; ++i) {
        PhaseExpr a = g.expr(), b = g.expr();
        CHECK((a + b).subst_p(repl) == a.subst_p(repl) + b.subst_p(repl));
        CHECK((a * b).subst_p(repl) == a.subst_p(repl) * b.subst_p(repl));
    }
    CHECK(PhaseExpr::pvar(n, 1).subst_p(repl) == repl[0]);
    CHECK(PhaseExpr::qvar(n, 1).subst_p(repl) == PhaseExpr::qvar(n, 1));
}

TEST_CASE("splitting off the phase-independent part is exact") {
    int n = 2;
    CoeffExpr c = CoeffExpr::t(2, 3);
    PhaseExpr f = PhaseExpr::qvar(n, 1) * CoeffExpr::t(1) +
                  PhaseExpr::constant(n, c) +
                  PhaseExpr::constant(n, Rational(7));
    CHECK(f.phase_constant_part() == c + CoeffExpr::from(Rational(7)));
    CHECK(f.phase_dependent_part() ==
          PhaseExpr::qvar(n, 1) * CoeffExpr::t(1));
    CHECK((f.phase_dependent_part() +
           PhaseExpr::constant(n, f.phase_constant_part())) == f);
}

TEST_CASE("phase expressions serialize losslessly") {
    Gen g(3);
    for (int i = 0; i < 40; ++i) {
        PhaseExpr a = g.expr();
        nlohmann::ordered_json j = expr_to_json(a);
        CHECK(expr_from_json(j) == a);
        std::string s = j.dump();
        CHECK(nlohmann::ordered_json::parse(s).dump() == s);
    }
}
