// Sampled-instance probe: BP-OSD vs exhaustive ML on shots drawn from the
// model itself, restricted to syndromes with a unique optimum.
#include <cstdio>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"
#include "qecforge/sim/dem.h"

using namespace qecforge;

int main(int argc, char **argv) {
    int num_dems = argc > 1 ? atoi(argv[1]) : 250;
    int shots_per = argc > 2 ? atoi(argv[2]) : 64;

    size_t instances = 0, unique_inst = 0, mismatch = 0, conv_wrong = 0;
    size_t mwpm_weight_bad = 0, mwpm_checked = 0;
    for (int s = 0; s < num_dems; s++) {
        Dem dem = random_graphlike_dem(1000 + s);
        OracleTable t = oracle_sweep(dem);
        CheckMatrix cm = CheckMatrix::from_dem(dem);
        MatchingGraph g = MatchingGraph::from_dem(dem);
        DemSample samp = dem_sample(dem, shots_per, 77000 + s);

        for (int k = 0; k < shots_per; k++) {
            uint32_t synd = 0;
            std::vector<uint8_t> ev(dem.num_detectors);
            for (uint32_t d = 0; d < dem.num_detectors; d++) {
                if (samp.detectors.get(k, d)) { synd |= 1u << d; ev[d] = 1; }
            }
            instances++;

            // MWPM weight clause (graphlike models are always matchable here).
            MwpmResult mr = mwpm_decode(g, ev);
            mwpm_checked++;
            if (!mr.matched || std::abs(mr.weight - t.min_w[synd]) > 1e-6 * (1.0 + t.min_w[synd])) {
                mwpm_weight_bad++;
            }

            if (!t.unique[synd]) continue;
            unique_inst++;
            BposdResult br = bposd_decode(cm, ev, BposdOptions{});
            uint64_t got = br.obs;
            if (got != t.cls[synd]) {
                mismatch++;
                if (br.converged) conv_wrong++;
                if (mismatch <= 8) {
                    printf("  miss: dem_seed=%d shot=%d synd=%u w*=%.4f cls*=%llu got=%llu conv=%d\n",
                           1000 + s, k, synd, t.min_w[synd],
                           (unsigned long long)t.cls[synd], (unsigned long long)got,
                           (int)br.converged);
                }
            }
        }
    }
    printf("dems=%d shots/dem=%d instances=%zu unique-opt=%zu\n", num_dems, shots_per,
           instances, unique_inst);
    printf("bposd mismatches on unique-opt: %zu (converged-wrong %zu)\n", mismatch, conv_wrong);
    printf("mwpm weight mismatches: %zu / %zu\n", mwpm_weight_bad, mwpm_checked);
    return 0;
}
