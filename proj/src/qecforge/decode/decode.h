#ifndef QECFORGE_DECODE_DECODE_H
#define QECFORGE_DECODE_DECODE_H

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qecforge/sim/dem.h"
#include "qecforge/sim/shot_table.h"

namespace qecforge {

// Weight of using a mechanism with probability p in a most-likely
// explanation: ln((1-p)/p). Probabilities are clamped away from {0,1}.
double mechanism_weight(double p);

// Matching (defect-pairing) view of a DEM. Only valid when every
// mechanism flips at most two detectors; hyperedge models are rejected,
// which is exactly why matching cannot decode the gross code.
struct MatchingGraph {
    static constexpr uint32_t kBoundary = UINT32_MAX;

    struct Edge {
        uint32_t a = 0;
        uint32_t b = kBoundary;  // kBoundary for single-detector mechanisms
        double weight = 0;
        uint64_t obs = 0;  // observable mask flipped by the mechanism
    };

    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    std::vector<Edge> edges;

    // Shortest-path completion, filled on construction: distance and
    // accumulated observable mask between any two nodes (boundary last).
    std::vector<std::vector<double>> dist;
    std::vector<std::vector<uint64_t>> path_obs;

    static MatchingGraph from_dem(const Dem &dem);
};

struct MwpmResult {
    uint64_t obs = 0;
    double weight = 0;
    bool matched = true;  // false when some defect has no finite pairing
};

// Pairs fired detectors (odd parity absorbed by the boundary) along
// shortest paths and XORs the observable masks of the matched paths.
// Exact minimum-weight for up to 16 defects; larger defect sets fall
// back to a greedy matching polished by pair swaps.
MwpmResult mwpm_decode(const MatchingGraph &g, const std::vector<uint8_t> &events);
ShotTable mwpm_decode_batch(const MatchingGraph &g, const ShotTable &dets, int threads = 0);

// Sparse binary check matrix: one column per error mechanism, one row
// per detector, plus the observable mask and prior of each column.
// Hyperedge columns are kept, so this view handles codes matching cannot.
struct CheckMatrix {
    uint32_t num_checks = 0;
    uint32_t num_cols = 0;
    uint32_t num_observables = 0;
    std::vector<std::vector<uint32_t>> cols;  // sorted detector rows per column
    std::vector<uint64_t> col_obs;
    std::vector<double> prior;

    static CheckMatrix from_dem(const Dem &dem);
    // Dense 0/1 rows for H and L plus per-column priors; handy in tests.
    static CheckMatrix from_dense(const std::vector<std::vector<uint8_t>> &h,
                                  const std::vector<std::vector<uint8_t>> &l,
                                  const std::vector<double> &p);
    void validate() const;
};

enum class BposdVariant {
    parity_check,  // each shot decoded independently against H
    batch,         // one decoder workspace amortized across a shot table
};
BposdVariant bposd_variant_from_name(const std::string &name);
std::string bposd_variant_name(BposdVariant v);

struct BposdOptions {
    BposdVariant variant = BposdVariant::parity_check;
    uint32_t max_iters = 60;
    uint32_t osd_order = 0;
};

struct BposdResult {
    uint64_t obs = 0;
    std::vector<uint8_t> error;  // estimated mechanism flips
    bool converged = false;      // BP alone satisfied the syndrome
};

// Min-sum belief propagation (flooding schedule, scale 0.625) followed,
// when BP does not converge, by ordered-statistics post-processing:
// columns sorted by posterior, GF(2) elimination to an information set,
// non-pivot columns pinned to zero (OSD-0) or swept over the osd_order
// least reliable of them.
BposdResult bposd_decode(const CheckMatrix &h, const std::vector<uint8_t> &events,
                         const BposdOptions &opts = {});
ShotTable bposd_decode_batch(const CheckMatrix &h, const ShotTable &dets,
                             const BposdOptions &opts = {}, int threads = 0);

struct BruteForceResult {
    uint64_t obs = 0;
    std::vector<uint8_t> error;
    double weight = std::numeric_limits<double>::infinity();
    bool feasible = false;
    bool unique = false;  // no other explanation ties the optimum weight
};

// Exact most-likely explanation by enumeration of all mechanism subsets;
// ties resolved toward the lexicographically smallest error vector.
// Refuses matrices with more than 24 columns.
BruteForceResult brute_force_decode(const CheckMatrix &h, const std::vector<uint8_t> &events);

struct RateEstimate {
    double rate = 0;
    double stderr_ = 0;
    size_t shots = 0;
    size_t failures = 0;
};

// Fraction of shots where any observable bit of the prediction disagrees
// with the actual flips, with a binomial standard error.
RateEstimate logical_error_rate(const ShotTable &predictions, const ShotTable &actual);

// Random graphlike DEM for decoder cross-checks: 1..max_detectors
// detectors, mechanisms touching one or two of them plus optional
// observable bits, priors in (0.01, 0.45).
Dem random_graphlike_dem(uint64_t seed, uint32_t max_detectors = 12,
                         uint32_t max_mechanisms = 24, uint32_t num_observables = 2);

}  // namespace qecforge

#endif
