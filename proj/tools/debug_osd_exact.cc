// Feeds OSD-0 perfect posterior marginals (computed exhaustively) to
// separate ranking quality from the elimination/solve itself.
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <vector>

#include "oracle_util.h"
#include "qecforge/decode/decode.h"

using namespace qecforge;

// Standalone OSD-0: sort columns by the supplied soft scores (ascending,
// most suspicious first), eliminate, solve with free columns at zero.
static std::vector<uint8_t> osd0(const CheckMatrix &h, const std::vector<uint8_t> &events,
                                 const std::vector<double> &score) {
    uint32_t n = h.num_cols, m = h.num_checks;
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return score[a] < score[b]; });
    std::vector<std::vector<uint8_t>> mat(m, std::vector<uint8_t>(n + 1, 0));
    for (uint32_t c = 0; c < n; c++) {
        for (uint32_t r : h.cols[c]) mat[r][c] = 1;
    }
    for (uint32_t r = 0; r < m; r++) mat[r][n] = events[r];
    std::vector<uint32_t> pivot_col, pivot_row;
    uint32_t rank = 0;
    for (uint32_t oc = 0; oc < n && rank < m; oc++) {
        uint32_t c = order[oc];
        uint32_t sel = m;
        for (uint32_t r = rank; r < m; r++) {
            if (mat[r][c]) {
                sel = r;
                break;
            }
        }
        if (sel == m) continue;
        std::swap(mat[rank], mat[sel]);
        for (uint32_t r = 0; r < m; r++) {
            if (r != rank && mat[r][c]) {
                for (uint32_t k = 0; k <= n; k++) mat[r][k] ^= mat[rank][k];
            }
        }
        pivot_col.push_back(c);
        pivot_row.push_back(rank);
        rank++;
    }
    std::vector<uint8_t> e(n, 0);
    for (uint32_t pi = 0; pi < rank; pi++) e[pivot_col[pi]] = mat[pivot_row[pi]][n];
    return e;
}

int main() {
    size_t checked = 0, miss_vec = 0, miss_coset = 0;
    for (uint64_t seed = 200; seed < 260; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        uint32_t m = dem.mechanisms.size();
        OracleTable vec = oracle_sweep(dem);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        size_t nsyn = size_t(1) << dem.num_detectors;

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
        // exact per-syndrome: total mass, per-column flipped mass, coset map
        std::vector<double> tot(nsyn, 0);
        std::vector<std::vector<double>> flip(nsyn, std::vector<double>(m, 0));
        std::vector<std::map<uint64_t, double>> mass(nsyn);
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
            double w = std::exp(lw);
            tot[synd] += w;
            mass[synd][cls] += w;
            for (uint32_t j = 0; j < m; j++) {
                if ((mask >> j) & 1) flip[synd][j] += w;
            }
        }

        std::vector<uint8_t> events(dem.num_detectors);
        std::vector<double> score(m);
        for (uint32_t s = 0; s < nsyn; s++) {
            if (std::isinf(vec.min_w[s]) || !vec.unique[s]) continue;
            for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (s >> d) & 1;
            for (uint32_t j = 0; j < m; j++) {
                double q = flip[s][j] / tot[s];
                q = std::min(std::max(q, 1e-15), 1 - 1e-15);
                score[j] = std::log((1 - q) / q);  // exact posterior LLR
            }
            std::vector<uint8_t> e = osd0(h, events, score);
            uint64_t obs = 0;
            for (uint32_t j = 0; j < m; j++) {
                if (e[j]) obs ^= obs_mask[j];
            }
            checked++;
            if (obs != vec.cls[s]) miss_vec++;
            double best = -1;
            uint64_t best_cls = 0;
            for (auto &[c, w] : mass[s]) {
                if (w > best) {
                    best = w;
                    best_cls = c;
                }
            }
            if (obs != best_cls) miss_coset++;
        }
    }
    std::printf("exact-posterior OSD-0: %zu checked, %zu vs vector-ML, %zu vs coset-ML\n",
                checked, miss_vec, miss_coset);
    return 0;
}
