// Compares BP-OSD against two exhaustive ground truths over many random
// graphlike models: the single most-likely error vector, and the
// most-likely observable coset (mass summed over degenerate errors).
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"

using namespace qecforge;

int main() {
    size_t vec_checked = 0, vec_miss = 0;
    size_t coset_checked = 0, coset_miss = 0;
    size_t vec_miss_converged = 0, vec_miss_osd = 0;
    size_t converged_total = 0;
    for (uint64_t seed = 200; seed < 260; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        uint32_t m = dem.mechanisms.size();
        OracleTable vec = oracle_sweep(dem);
        CheckMatrix h = CheckMatrix::from_dem(dem);

        // coset masses: per syndrome, per class, total odds-product
        size_t nsyn = size_t(1) << dem.num_detectors;
        std::vector<std::map<uint64_t, double>> mass(nsyn);
        std::vector<uint32_t> det_mask(m);
        std::vector<uint64_t> obs_mask(m);
        std::vector<double> lodds(m);
        for (uint32_t j = 0; j < m; j++) {
            det_mask[j] = 0;
            for (uint32_t d : dem.mechanisms[j].detectors()) det_mask[j] |= 1u << d;
            obs_mask[j] = 0;
            for (uint32_t o : dem.mechanisms[j].observables()) obs_mask[j] |= 1ULL << o;
            lodds[j] = std::log(dem.mechanisms[j].p / (1 - dem.mechanisms[j].p));
        }
        uint32_t synd = 0;
        uint64_t cls = 0;
        double lw = 0;
        uint32_t mask = 0;
        for (uint64_t g = 0; g < (uint64_t(1) << m); g++) {
            if (g) {
                uint32_t j = std::countr_zero(g);
                synd ^= det_mask[j];
                cls ^= obs_mask[j];
                lw += ((mask >> j) & 1) ? -lodds[j] : lodds[j];
                mask ^= 1u << j;
            }
            mass[synd][cls] += std::exp(lw);
        }

        std::vector<uint8_t> events(dem.num_detectors);
        for (uint32_t s = 0; s < nsyn; s++) {
            if (std::isinf(vec.min_w[s])) continue;
            for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (s >> d) & 1;
            BposdResult r = bposd_decode(h, events);

            if (vec.unique[s]) {
                vec_checked++;
                if (r.converged) converged_total++;
                if (r.obs != vec.cls[s]) {
                    vec_miss++;
                    if (r.converged) {
                        vec_miss_converged++;
                    } else {
                        vec_miss_osd++;
                    }
                }
            }

            // best coset with a strict relative gap
            double best = -1, second = -1;
            uint64_t best_cls = 0;
            for (auto &[c, w] : mass[s]) {
                if (w > best) {
                    second = best;
                    best = w;
                    best_cls = c;
                } else if (w > second) {
                    second = w;
                }
            }
            bool coset_unique = second < best * (1 - 1e-9);
            if (coset_unique) {
                coset_checked++;
                if (r.obs != best_cls) coset_miss++;
            }
        }
    }
    std::printf("vector-ML:  %zu mismatches / %zu unique instances\n", vec_miss, vec_checked);
    std::printf("   from converged BP: %zu   from OSD: %zu   (BP converged on %zu)\n",
                vec_miss_converged, vec_miss_osd, converged_total);
    std::printf("coset-ML:   %zu mismatches / %zu unique instances\n", coset_miss, coset_checked);
    return 0;
}
