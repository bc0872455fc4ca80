// Scratch probe for decoder disagreements on small random models.
#include <cstdio>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"

using namespace qecforge;

int main() {
    Dem dem = random_graphlike_dem(200, 10, 14);
    std::printf("dets=%u mechs=%zu\n", dem.num_detectors, dem.mechanisms.size());
    for (size_t j = 0; j < dem.mechanisms.size(); j++) {
        std::printf("  mech %zu p=%.4f w=%.4f :", j, dem.mechanisms[j].p,
                    mechanism_weight(dem.mechanisms[j].p));
        for (uint32_t s : dem.mechanisms[j].symptom) {
            if (symptom_is_obs(s)) {
                std::printf(" L%u", symptom_obs_index(s));
            } else {
                std::printf(" D%u", s);
            }
        }
        std::printf("\n");
    }
    OracleTable oracle = oracle_sweep(dem);
    CheckMatrix h = CheckMatrix::from_dem(dem);
    uint32_t synd = 20;
    std::vector<uint8_t> events(dem.num_detectors);
    for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (synd >> d) & 1;
    std::printf("syndrome mask %u, oracle w=%.6f cls=%llu best_mask=%u unique=%d\n", synd,
                oracle.min_w[synd], (unsigned long long)oracle.cls[synd], oracle.best[synd],
                oracle.unique[synd]);
    for (uint32_t iters : {5u, 20u, 60u, 200u}) {
        BposdOptions o;
        o.max_iters = iters;
        BposdResult ri = bposd_decode(h, events, o);
        std::printf("iters=%u converged=%d obs=%llu err:", iters, ri.converged,
                    (unsigned long long)ri.obs);
        for (size_t j = 0; j < ri.error.size(); j++) {
            if (ri.error[j]) std::printf(" %zu", j);
        }
        std::printf("\n");
    }
    BposdResult r = bposd_decode(h, events);
    std::printf("bposd converged=%d obs=%llu error:", r.converged, (unsigned long long)r.obs);
    double w = 0;
    for (size_t j = 0; j < r.error.size(); j++) {
        if (r.error[j]) {
            std::printf(" %zu", j);
            w += mechanism_weight(h.prior[j]);
        }
    }
    std::printf("  (weight %.6f)\n", w);
    return 0;
}
