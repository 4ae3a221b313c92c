// Maximum sum secrecy rate on the reference scenario for a few CSI error
// bounds, at 3 dB and 6 dB budgets.

#include <cstdio>

#include "fdsec/fdsec.hpp"

int main() {
    fdsec::SolverConfig cfg;
    cfg.grid_k = cfg.grid_l = 20;
    for (double db : {3.0, 6.0}) {
        for (double eps : {0.0, 0.02, 0.04}) {
            const auto s = fdsec::reference_scenario(db, eps);
            const auto res = fdsec::sweep_region(s, fdsec::CsiMode::robust, cfg);
            const auto* best = res.best_point();
            std::printf("P=%g dB eps=%.2f  max sum secrecy %.6f  (p1s %.4f p1n %.4f p2s %.4f p2n %.4f)\n", db, eps,
                        res.max_sum_secrecy(), best->alloc.p1s, best->alloc.p1n, best->alloc.p2s, best->alloc.p2n);
        }
    }
}
