#ifndef QECFORGE_SIM_DEM_H
#define QECFORGE_SIM_DEM_H

#include <cstdint>
#include <string>
#include <vector>

#include "qecforge/circuit/circuit.h"
#include "qecforge/sim/shot_table.h"

namespace qecforge {

// Symptom ids: plain detector index, or kObsFlag|k for observable k.
constexpr uint32_t kObsFlag = 1u << 31;

inline bool symptom_is_obs(uint32_t id) {
    return (id & kObsFlag) != 0;
}
inline uint32_t symptom_obs_index(uint32_t id) {
    return id & ~kObsFlag;
}

// One independent error mechanism: fires with probability p and flips
// every detector/observable in its symptom.
struct DemMechanism {
    double p = 0;
    std::vector<uint32_t> symptom;  // sorted; detectors first, then observables

    std::vector<uint32_t> detectors() const;
    std::vector<uint32_t> observables() const;
};

struct Dem {
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;
    std::vector<DemMechanism> mechanisms;
    std::vector<std::string> warnings;
};

// Expands every noise channel into Pauli components, propagates each
// component to the detectors/observables it flips, and merges components
// with identical symptoms (p <- p1(1-p2) + p2(1-p1)). Components with
// empty symptoms are dropped. Merged probabilities above 1/2 are folded to
// 1-p with a warning.
//
// DEPOLARIZE2 expansion into 15 disjoint components at p/15 requires
// approximate_disjoint; otherwise the correlated channel is an error.
Dem compile_dem(const Circuit &c, bool approximate_disjoint = true);

// Text format: one `error(p) D3 D7 L0` line per mechanism, with
// `# num_detectors:`/`# num_observables:` header comments.
std::string emit_dem(const Dem &dem);
Dem parse_dem(const std::string &text);

// Samples each mechanism independently and XORs symptoms into packed
// detector/observable tables.
struct DemSample {
    ShotTable detectors;
    ShotTable observables;
};
DemSample dem_sample(const Dem &dem, size_t shots, uint64_t seed, int threads = 0);

// Per-detector marginal flip probability implied by the model
// (independent-mechanism XOR: q = (1 - prod(1-2p_i))/2).
std::vector<double> dem_detector_marginals(const Dem &dem);

}  // namespace qecforge

#endif
