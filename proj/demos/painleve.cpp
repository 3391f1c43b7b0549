// Walks the one-dimensional members down to the four classical second-order
// equations and prints each stage of the reduction.
#include <viete/painleve.hpp>

#include <cstdio>

using namespace viete;

int main() {
    for (const OdeReduction& r : all_reductions()) {
        std::printf("%s  (family m=%d)\n", r.name.c_str(), r.m);
        for (const auto& [idx, v] : r.a)
            std::printf("  a_%d = %s\n", idx, v.str().c_str());
        std::printf("  start:   %s\n", r.frame.str().c_str());
        std::printf("  change:  %s\n", r.change.c_str());
        std::printf("  reduced: %s\n", r.reduced.str().c_str());
        std::printf("  target:  %s\n", r.target.str().c_str());
        for (const auto& [k, v] : r.constants)
            std::printf("  %s = %s\n", k.c_str(), v.str().c_str());
        std::printf("  exact match: %s\n\n", r.matches ? "yes" : "NO");
    }
    return 0;
}
