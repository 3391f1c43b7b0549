// Prints a few deformed families and their certification status.
#include <viete/deform.hpp>

#include <cstdio>

using namespace viete;

int main() {
    for (auto [n, m] : {std::pair{2, 0}, {2, 1}, {3, 1}, {3, 3}}) {
        DeformedSystem sys = solve_deformation(n, m, false);
        CertifyReport rep = certify(sys);
        std::printf("ordinary family n=%d m=%d: %s\n", n, m,
                    rep.exact ? "flat" : "NOT flat");
        for (const auto& [idx, f] : sys.funcs)
            std::printf("  c[%d] = %s\n", idx, f.str().c_str());
    }
    return 0;
}
