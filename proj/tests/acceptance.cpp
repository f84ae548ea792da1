// Acceptance gate: runs the ten verification criteria and prints one
// PASS/FAIL line per criterion with the observed figure vs its threshold.
// Usage: acceptance [1..10 | all]   (default: all)

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "stokescluster/verify.hpp"

namespace sc = stokescluster;

namespace {

sc::SuiteResult run_criterion(int k) {
    switch (k) {
        case 1: return sc::suite_two_method(50, 1);
        case 2: return sc::suite_genericity(50, 1);
        case 3: return sc::suite_flip_coherence(200, 2);
        case 4: return sc::suite_chamber(10, 3);
        case 5: return sc::suite_equivariance(20, 4);
        case 6: return sc::suite_jacobian(20, 5);
        case 7: return sc::suite_wall_sweep(2000);
        case 8: return sc::suite_combinatorics();
        case 9: return sc::suite_roundtrip(100, 6);
        case 10: return sc::suite_horizontality(2000, 3);
        default: break;
    }
    std::fprintf(stderr, "criterion must be 1..10\n");
    std::exit(2);
}

bool report(int k) {
    const sc::SuiteResult r = run_criterion(k);
    std::printf("%s criterion %d (%s): %s (%d samples, %.1f s)\n", r.pass ? "PASS" : "FAIL", k,
                r.name.c_str(), r.comparison.c_str(), r.samples, r.seconds);
    if (!r.detail.empty()) std::fputs(r.detail.c_str(), stdout);
    std::fflush(stdout);
    return r.pass;
}

} // namespace

int main(int argc, char** argv) {
    const std::string pick = argc > 1 ? argv[1] : "all";
    if (pick == "all") {
        bool ok = true;
        for (int k = 1; k <= 10; ++k) ok = report(k) && ok;
        return ok ? 0 : 1;
    }
    char* end = nullptr;
    const long k = std::strtol(pick.c_str(), &end, 10);
    if (end == pick.c_str() || *end != '\0' || k < 1 || k > 10) {
        std::fprintf(stderr, "usage: acceptance [1..10 | all]\n");
        return 2;
    }
    return report(static_cast<int>(k)) ? 0 : 1;
}
