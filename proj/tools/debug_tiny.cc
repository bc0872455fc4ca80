// Dissect BP-OSD failures on the smallest models where they should not happen.
#include <cstdio>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"
#include "qecforge/sim/dem.h"

using namespace qecforge;

int main() {
    for (int s = 0; s < 200; s++) {
        Dem dem = random_graphlike_dem(1000 + s);
        if (dem.num_detectors > 4) continue;
        OracleTable t = oracle_sweep(dem);
        CheckMatrix cm = CheckMatrix::from_dem(dem);
        size_t nsyn = size_t(1) << dem.num_detectors;
        for (size_t synd = 0; synd < nsyn; synd++) {
            if (t.min_w[synd] == std::numeric_limits<double>::infinity()) continue;
            if (!t.unique[synd]) continue;
            std::vector<uint8_t> ev(dem.num_detectors);
            for (uint32_t d = 0; d < dem.num_detectors; d++) ev[d] = (synd >> d) & 1;
            BposdResult br = bposd_decode(cm, ev, BposdOptions{});
            if (br.obs == t.cls[synd]) continue;

            printf("seed=%d dets=%u mechs=%zu synd=%zx conv=%d got_obs=%llu want=%llu w*=%.4f\n",
                   1000 + s, dem.num_detectors, dem.mechanisms.size(), synd, (int)br.converged,
                   (unsigned long long)br.obs, (unsigned long long)t.cls[synd], t.min_w[synd]);
            printf("  best subset:");
            for (uint32_t j = 0; j < dem.mechanisms.size(); j++) {
                if ((t.best[synd] >> j) & 1) printf(" %u", j);
            }
            printf("\n  decoder err:");
            for (size_t j = 0; j < br.error.size(); j++) {
                if (br.error[j]) printf(" %zu", j);
            }
            printf("\n  mechanisms:\n");
            for (size_t j = 0; j < dem.mechanisms.size(); j++) {
                printf("    e%-2zu p=%.4f w=%.4f :", j, dem.mechanisms[j].p,
                       mechanism_weight(dem.mechanisms[j].p));
                for (uint32_t id : dem.mechanisms[j].symptom) {
                    if (symptom_is_obs(id)) printf(" L%u", symptom_obs_index(id));
                    else printf(" D%u", id);
                }
                printf("\n");
            }
        }
    }
    return 0;
}
