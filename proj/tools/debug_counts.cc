// Freeze test thresholds: counts and agreement on the exact seed ranges
// the unit tests use.
#include <cmath>
#include <cstdio>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"
#include "qecforge/sim/dem.h"

using namespace qecforge;

int main() {
    // Mwpm.WeightMatchesExhaustiveMinimum: seeds 0..49, (10, 14)
    size_t checked = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        OracleTable t = oracle_sweep(dem);
        for (double w : t.min_w) {
            if (!std::isinf(w)) checked++;
        }
    }
    printf("mwpm sweep feasible syndromes (seeds 0-49, 10x14): %zu\n", checked);

    // Bposd exhaustive agreement: seeds 200..239, (10, 14)
    size_t uniq = 0, agree = 0;
    for (uint64_t seed = 200; seed < 240; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        OracleTable t = oracle_sweep(dem);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        std::vector<uint8_t> ev(dem.num_detectors);
        for (uint32_t synd = 0; synd < (1u << dem.num_detectors); synd++) {
            if (std::isinf(t.min_w[synd]) || !t.unique[synd]) continue;
            for (uint32_t d = 0; d < dem.num_detectors; d++) ev[d] = (synd >> d) & 1;
            BposdResult r = bposd_decode(h, ev);
            uniq++;
            if (r.obs == t.cls[synd]) agree++;
        }
    }
    printf("bposd exhaustive (seeds 200-239, 10x14): %zu/%zu agree (%.4f)\n", agree, uniq,
           (double)agree / uniq);

    // Failure-rate comparison on sampled shots, same seeds.
    size_t shots_total = 0, bp_fail = 0, ml_fail = 0;
    for (uint64_t seed = 200; seed < 240; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        DemSample samp = dem_sample(dem, 500, seed * 13 + 1);
        std::vector<uint8_t> ev(dem.num_detectors);
        for (size_t k = 0; k < 500; k++) {
            uint64_t actual = 0;
            for (uint32_t o = 0; o < dem.num_observables; o++) {
                if (samp.observables.get(k, o)) actual |= 1ULL << o;
            }
            for (uint32_t d = 0; d < dem.num_detectors; d++) ev[d] = samp.detectors.get(k, d);
            BposdResult bp = bposd_decode(h, ev);
            BruteForceResult ml = brute_force_decode(h, ev);
            shots_total++;
            if (bp.obs != actual) bp_fail++;
            if (ml.obs != actual) ml_fail++;
        }
    }
    double pa = (double)bp_fail / shots_total, pb = (double)ml_fail / shots_total;
    double sigma = std::sqrt(pa * (1 - pa) / shots_total + pb * (1 - pb) / shots_total);
    printf("sampled failure rates: bposd %.5f  ml %.5f  diff %.5f  3sigma %.5f\n", pa, pb,
           pa - pb, 3 * sigma);
    return 0;
}
