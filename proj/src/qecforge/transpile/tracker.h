#ifndef QECFORGE_TRANSPILE_TRACKER_H
#define QECFORGE_TRANSPILE_TRACKER_H

#include <cstdint>
#include <cstddef>
#include <vector>

namespace qecforge {

// Record of how logical circuit qubits were placed on a device and how the
// placement evolved through inserted SWAPs. Routing fills one of these so
// later stages (noise, reporting) can recover the logical<->physical map at
// any point in the routed circuit.
struct TrackerLog {
    // logical index -> physical qubit at circuit start
    std::vector<uint32_t> initial_mapping;

    struct SwapEvent {
        size_t instruction_index;  // position of the SWAP in the routed circuit
        uint32_t phys_a, phys_b;
    };
    std::vector<SwapEvent> swaps;

    // logical -> physical snapshot taken right after each swap, aligned
    // with `swaps`. Replaying the swaps from the initial mapping must
    // reproduce every snapshot.
    std::vector<std::vector<uint32_t>> snapshots;

    // logical index -> physical qubit after all swaps
    std::vector<uint32_t> final_mapping;
};

}  // namespace qecforge

#endif
