// Scratch validation of the numeric module (deleted before release).
#include <cstdio>
#include <map>
#include <string>

#include "viete/deform.hpp"
#include "viete/numeric.hpp"
#include "viete/canonical.hpp"
#include "viete/io.hpp"
#include "viete/systems.hpp"

using namespace viete;

static int bad = 0;
#define CHECK(cond)                                                            \
    do {                                                                       \
        if (!(cond)) {                                                         \
            ++bad;                                                             \
            std::printf("FAIL %s:%d %s\n", __FILE__, __LINE__, #cond);         \
        }                                                                      \
    } while (0)

static std::map<int, double> bind_consts(
    const std::map<std::string, double>& by_name) {
    std::map<int, double> out;
    for (const auto& [name, v] : by_name) {
        auto id = symtab().lookup(name);
        if (!id) throw std::runtime_error("no symbol " + name);
        out[*id] = v;
    }
    return out;
}

int main() {
    // Henon-Heiles-shaped member family: n=2, m=1, gauge-fixed tails.
    DeformOptions opt;
    {
        CoeffExpr t1 = CoeffExpr::t(1), t2 = CoeffExpr::t(2);
        opt.tail_presets[0] =
            t1 * t1 * Rational(1, 2) + t1 * t2 * t2 * Rational(3);
        opt.tail_presets[1] = CoeffExpr::zero();
    }
    DeformedSystem hh = solve_deformation(2, 1, false, opt);
    auto params = bind_consts({{"a_5", 0.0},
                               {"a_4", -1.0},
                               {"a_3", 0.0},
                               {"a_2", 0.0},
                               {"a_-1", -0.2}});
    MultiFlow flow({hh.rows[1], hh.rows[2]}, params);

    FlowState start{{0.1, -0.7}, {0.3, 0.2}, {0.0, 0.0}};
    std::vector<double> box{0.1, 0.1};

    double disc4 = path_discrepancy(flow, start, box, 1e-4);
    std::printf("deformed discrepancy h=1e-4: %.3e\n", disc4);
    CHECK(disc4 < 1e-8);

    // Order check: halving the step should shrink the discrepancy ~16x.
    std::vector<double> wide{0.5, 0.5};
    for (double h : {5e-2, 2.5e-2, 1.25e-2, 6.25e-3})
        std::printf("  disc(h=%.4g) = %.6e\n", h,
                    path_discrepancy(flow, start, wide, h));
    double d1 = path_discrepancy(flow, start, wide, 5e-2);
    double d2 = path_discrepancy(flow, start, wide, 2.5e-2);
    std::printf("halving: %.3e / %.3e = %.2f\n", d1, d2, d1 / d2);
    CHECK(d1 / d2 > 8.0);

    // Negative control: n=3 m=1 quadratic generators do not commute.
    MultiFlow geo({generator_E(3, 1, 1), generator_E(3, 1, 2),
                   generator_E(3, 1, 3)});
    FlowState g0{{0.2, -0.4, 0.3}, {0.1, 0.25, -0.15}, {0.0, 0.0, 0.0}};
    std::vector<double> gbox{0.1, 0.1, 0.1};
    double gd1 = path_discrepancy(geo, g0, gbox, 1e-3);
    double gd2 = path_discrepancy(geo, g0, gbox, 5e-4);
    std::printf("control discrepancy: %.3e (h=1e-3), %.3e (h=5e-4)\n", gd1, gd2);
    CHECK(gd1 > 1e-4);
    CHECK(gd2 > 1e-4);

    // Autonomous member conserves its own value along its own flow.
    MultiFlow e2({generator_E(2, 1, 1), generator_E(2, 1, 2)});
    FlowState e0{{0.3, -0.6}, {0.4, 0.1}, {0.0, 0.0}};
    double drift = conservation_drift(e2, e0, 1, 0.1, 1e-4);
    std::printf("autonomous drift: %.3e\n", drift);
    CHECK(drift < 1e-10);

    // Time-dependent member of the deformed family: value changes, flows
    // still commute (checked above); sanity that evaluation works.
    double H1 = flow.hamiltonian(start, 1);
    std::printf("H1 at start: %.6f\n", H1);
    CHECK(H1 != 0.0);

    // JSON round-trip of a solved family.
    {
        DeformedSystem mag = solve_deformation(2, 1, true);
        json j = system_to_json(mag);
        std::string dumped = j.dump(2);
        DeformedSystem back = system_from_json(json::parse(dumped));
        CHECK(back.n == mag.n && back.m == mag.m && back.magnetic);
        for (int r = 1; r <= 2; ++r) CHECK((back.rows[r] - mag.rows[r]).is_zero());
        CHECK(back.funcs.size() == mag.funcs.size());
        for (const auto& [idx, f] : mag.funcs)
            CHECK((back.funcs.at(idx) - f).is_zero());
        CHECK((back.e_func - mag.e_func).is_zero());
        std::string again = system_to_json(back).dump(2);
        CHECK(again == dumped);
        CertifyReport rep = certify(back);
        CHECK(rep.weak);
        std::printf("json round-trip bytes: %zu\n", dumped.size());
    }
    // Expression round-trip with negative powers and exponentials.
    {
        DeformedSystem s34 = solve_deformation(3, 4, true);
        json j = expr_to_json(s34.rows[2]);
        PhaseExpr back = expr_from_json(j);
        CHECK((back - s34.rows[2]).is_zero());
        std::printf("latex sample: %s\n", latex(s34.funcs.at(4)).c_str());
        std::printf("latex row1 (trunc): %.120s...\n",
                    latex(s34.rows[1]).c_str());
    }

    // General target witness: roundtrip oracle + obstructions.
    {
        auto roundtrip = [&](int n, int m, const TargetWitness& w,
                             std::map<int, CoeffExpr> targets) {
            auto ind = induced_coeffs(n, m, w.b, w.ebar);
            bool ok = true;
            auto tg = [&](int alpha) {
                auto it = targets.find(alpha);
                return it == targets.end() ? CoeffExpr::zero() : it->second;
            };
            for (int alpha = -m; alpha <= 2 * n - m + 2; ++alpha) {
                if (alpha >= 0 && alpha < n) continue;  // gauge tails
                CoeffExpr got =
                    ind.count(alpha) ? ind.at(alpha).at_time_zero()
                                     : CoeffExpr::zero();
                if (!(got - tg(alpha)).is_zero()) {
                    ok = false;
                    std::printf("  roundtrip alpha=%d: got %s want %s\n", alpha,
                                got.str().c_str(), tg(alpha).str().c_str());
                }
            }
            return ok;
        };
        CoeffExpr al = CoeffExpr::param("alpha");

        // Henon-Heiles targets are unreachable.
        std::map<int, CoeffExpr> hh{{5, CoeffExpr::zero()},
                                    {4, CoeffExpr::from(Rational(-1))},
                                    {3, CoeffExpr::zero()},
                                    {2, CoeffExpr::zero()},
                                    {-1, Rational(-1, 4) * al}};
        TargetWitness whh = magnetic_witness(2, 1, hh, "whh");
        CHECK(!whh.exists);
        std::printf("HH obstruction: %s\n", whh.obstruction.c_str());

        // First-transcendent targets are unreachable as well.
        std::map<int, CoeffExpr> pi1{{3, CoeffExpr::from(Rational(-1))}};
        TargetWitness wpi = magnetic_witness(1, 0, pi1, "gwPI");
        CHECK(!wpi.exists);

        // Mirrored obstruction from the bottom band.
        std::map<int, CoeffExpr> bot{{-2, CoeffExpr::zero()},
                                     {-1, CoeffExpr::one()}};
        TargetWitness wb = magnetic_witness(1, 2, bot, "gwB");
        CHECK(!wb.exists);
        std::printf("bottom obstruction: %s\n", wb.obstruction.c_str());

        // Second-transcendent targets: solvable, roundtrip exact.
        std::map<int, CoeffExpr> pii{{4, CoeffExpr::from(Rational(1, 4))},
                                     {1, Rational(-1) * al}};
        TargetWitness w2 = magnetic_witness(1, 0, pii, "gwPII");
        CHECK(w2.exists);
        CHECK(roundtrip(1, 0, w2, pii));

        // Fourth-transcendent targets with two adjoined radicals.
        CoeffExpr a1s = CoeffExpr::param("pa1"), am1s = CoeffExpr::param("pam1");
        std::map<int, CoeffExpr> piv{{3, CoeffExpr::one()},
                                     {2, CoeffExpr::zero()},
                                     {1, a1s},
                                     {-1, am1s}};
        TargetWitness w4 = magnetic_witness(1, 1, piv, "gwPIV");
        CHECK(w4.exists);
        CHECK(roundtrip(1, 1, w4, piv));
        std::printf("PIV ebar: %s\n", w4.ebar.str().c_str());

        // Generic solvable n=2 case built from a known image.
        {
            std::map<int, CoeffExpr> d{{0, CoeffExpr::one()},
                                       {1, CoeffExpr::from(Rational(2))},
                                       {2, CoeffExpr::zero()},
                                       {3, CoeffExpr::from(Rational(3))}};
            CoeffExpr e = CoeffExpr::from(Rational(5));
            std::map<int, CoeffExpr> targets;
            for (const auto& [alpha, c] : induced_coeffs(2, 1, d, e))
                targets[alpha] = c.at_time_zero();
            TargetWitness wg = magnetic_witness(2, 1, targets, "gwG");
            CHECK(wg.exists);
            CHECK(roundtrip(2, 1, wg, targets));
        }
        // Degenerate-leading solvable case: top band zero, middle nonzero.
        {
            std::map<int, CoeffExpr> d{{0, CoeffExpr::from(Rational(2))},
                                       {1, CoeffExpr::one()},
                                       {2, CoeffExpr::zero()},
                                       {3, CoeffExpr::zero()}};
            CoeffExpr e = CoeffExpr::from(Rational(-1));
            std::map<int, CoeffExpr> targets;
            for (const auto& [alpha, c] : induced_coeffs(2, 2, d, e))
                targets[alpha] = c.at_time_zero();
            TargetWitness wg = magnetic_witness(2, 2, targets, "gwH");
            CHECK(wg.exists);
            CHECK(roundtrip(2, 2, wg, targets));
        }
    }

    std::printf("total bad: %d\n", bad);
    return bad != 0;
}
