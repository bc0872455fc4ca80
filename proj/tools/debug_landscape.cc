// Failure landscape: BP-OSD vs exhaustive ML, bucketed by model size,
// exhaustive and sampled, with a prior-scale knob.
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"
#include "qecforge/sim/dem.h"

using namespace qecforge;

int main(int argc, char **argv) {
    double prior_scale = argc > 1 ? atof(argv[1]) : 1.0;
    int max_iters = argc > 2 ? atoi(argv[2]) : 60;
    int num_dems = argc > 3 ? atoi(argv[3]) : 200;

    // key: (detectors, mechanisms/4) bucket -> {unique_insts, exhaustive_fails}
    std::map<std::pair<int, int>, std::pair<size_t, size_t>> by_size;
    size_t ex_unique = 0, ex_fail = 0;
    size_t sm_inst = 0, sm_unique = 0, sm_fail = 0;
    BposdOptions opt;
    opt.max_iters = max_iters;

    for (int s = 0; s < num_dems; s++) {
        Dem dem = random_graphlike_dem(1000 + s);
        for (auto &mech : dem.mechanisms) mech.p *= prior_scale;
        OracleTable t = oracle_sweep(dem);
        CheckMatrix cm = CheckMatrix::from_dem(dem);
        auto key = std::make_pair((int)dem.num_detectors, (int)dem.mechanisms.size() / 4);

        // exhaustive over unique-optimum syndromes
        size_t nsyn = size_t(1) << dem.num_detectors;
        for (size_t synd = 0; synd < nsyn; synd++) {
            if (t.min_w[synd] == std::numeric_limits<double>::infinity()) continue;
            if (!t.unique[synd]) continue;
            ex_unique++;
            by_size[key].first++;
            std::vector<uint8_t> ev(dem.num_detectors);
            for (uint32_t d = 0; d < dem.num_detectors; d++) ev[d] = (synd >> d) & 1;
            BposdResult br = bposd_decode(cm, ev, opt);
            if (br.obs != t.cls[synd]) {
                ex_fail++;
                by_size[key].second++;
            }
        }

        // sampled instances
        DemSample samp = dem_sample(dem, 64, 77000 + s);
        for (int k = 0; k < 64; k++) {
            uint32_t synd = 0;
            std::vector<uint8_t> ev(dem.num_detectors);
            for (uint32_t d = 0; d < dem.num_detectors; d++) {
                if (samp.detectors.get(k, d)) { synd |= 1u << d; ev[d] = 1; }
            }
            sm_inst++;
            if (!t.unique[synd]) continue;
            sm_unique++;
            BposdResult br = bposd_decode(cm, ev, opt);
            if (br.obs != t.cls[synd]) sm_fail++;
        }
    }

    printf("prior_scale=%.3f max_iters=%d dems=%d\n", prior_scale, max_iters, num_dems);
    printf("exhaustive: %zu fails / %zu unique-optimum syndromes (%.3f%%)\n", ex_fail,
           ex_unique, 100.0 * ex_fail / ex_unique);
    printf("sampled:    %zu fails / %zu unique-opt instances (of %zu shots)\n", sm_fail,
           sm_unique, sm_inst);
    printf("by (detectors, mech bucket*4): fails/insts\n");
    for (auto &[k, v] : by_size) {
        if (v.second) {
            printf("  d=%2d m~%2d-%2d: %4zu/%5zu\n", k.first, k.second * 4, k.second * 4 + 3,
                   v.second, v.first);
        }
    }
    return 0;
}
