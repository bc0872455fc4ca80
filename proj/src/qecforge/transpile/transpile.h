#ifndef QECFORGE_TRANSPILE_TRANSPILE_H
#define QECFORGE_TRANSPILE_TRANSPILE_H

#include <cstdint>
#include <string>
#include <vector>

#include "qecforge/arch/device.h"
#include "qecforge/circuit/circuit.h"
#include "qecforge/transpile/tracker.h"

namespace qecforge {

enum class LayoutStrategy : uint8_t { trivial, dense, sabre };
enum class RoutingStrategy : uint8_t { basic, stochastic, sabre };
enum class GateSetId : uint8_t { stim_clifford, heron, h2 };

LayoutStrategy layout_strategy_from_name(const std::string &name);
RoutingStrategy routing_strategy_from_name(const std::string &name);
GateSetId gateset_from_name(const std::string &name);
const char *layout_strategy_name(LayoutStrategy s);
const char *routing_strategy_name(RoutingStrategy s);
const char *gateset_name(GateSetId g);

struct LayoutMap {
    LayoutStrategy strategy = LayoutStrategy::trivial;
    std::vector<uint32_t> logical_to_physical;  // injective, indexed by logical qubit
};

struct SwapMetrics {
    uint32_t swaps_inserted = 0;
    uint32_t extra_2q = 0;  // 3 per swap
    double pct_of_original_2q = 0;
    double gates_added_per_original = 0;
};

struct RouteResult {
    Circuit circuit;
    TrackerLog tracker;
    SwapMetrics metrics;
};

// Chooses initial physical positions for the circuit's qubits.
//   trivial: logical i on physical i.
//   dense:   greedily grown connected block maximizing internal edge count.
//   sabre:   forward/backward routing refinement from a seeded start.
// Throws std::invalid_argument when the circuit needs more qubits than the
// device has.
LayoutMap layout(const Circuit &c, const Device &d, LayoutStrategy strategy, uint64_t seed = 0);

// Rewrites the circuit onto physical qubits, inserting SWAP chains so every
// two-qubit gate lands on a device edge. Strategies:
//   basic:      walk the shortest path one hop at a time.
//   stochastic: best of 32 randomized shortest-path walks per blocked gate,
//               scored with a small lookahead.
//   sabre:      scored swap selection with a 20-gate lookahead window and
//               decaying per-qubit penalties (reset every 5 swaps).
// Multi-pair two-qubit instructions are split into one instruction per pair.
Circuit route_circuit(const Circuit &c, const Device &d, const LayoutMap &l,
                      RoutingStrategy strategy, uint64_t seed, TrackerLog *tracker_out,
                      SwapMetrics *metrics_out);
RouteResult route(const Circuit &c, const Device &d, const LayoutMap &l, RoutingStrategy strategy,
                  uint64_t seed);

// Rewrites every gate into the target set. SWAPs become three CXs before
// entangler rewriting; single-qubit gates become minimal native words.
// optimize=true additionally cancels adjacent inverse pairs and
// resynthesizes runs of single-qubit gates.
Circuit translate(const Circuit &c, GateSetId g, bool optimize = false);

// True when every two-qubit gate of c acts on an edge of d.
bool gates_on_device(const Circuit &c, const Device &d);

// True when the recorded snapshots equal replaying the swaps from the
// initial mapping, and final_mapping matches the last state.
bool tracker_consistent(const TrackerLog &t);

// Conjugation-tableau equality between the logical circuit and the routed
// (and possibly translated) physical circuit, up to the qubit permutation
// the tracker records. Both circuits must be purely unitary.
bool tableau_equivalent_mod_tracker(const Circuit &logical, const Circuit &physical,
                                    const TrackerLog &t);

SwapMetrics overhead_metrics(const Circuit &before, const Circuit &after);

}  // namespace qecforge

#endif
