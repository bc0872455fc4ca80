#ifndef QECFORGE_CODES_BUILDER_H
#define QECFORGE_CODES_BUILDER_H

#include <cstdint>
#include <vector>

#include "qecforge/circuit/circuit.h"

namespace qecforge {

// Detector/observable bookkeeping in absolute measurement indices; the
// rec[-k] conversion happens at append time.
inline void add_detector(Circuit &c, const std::vector<uint32_t> &abs_records) {
    std::vector<Target> targets;
    targets.reserve(abs_records.size());
    for (uint32_t a : abs_records) {
        targets.push_back(Target::rec(c.num_measurements - a));
    }
    c.append(Op::DETECTOR, std::move(targets));
}

inline void add_observable(Circuit &c, uint32_t index, const std::vector<uint32_t> &abs_records) {
    std::vector<Target> targets;
    targets.reserve(abs_records.size());
    for (uint32_t a : abs_records) {
        targets.push_back(Target::rec(c.num_measurements - a));
    }
    c.append(Op::OBSERVABLE_INCLUDE, std::move(targets), {(double)index});
}

inline void add_gate(Circuit &c, Op op, const std::vector<uint32_t> &qubits) {
    std::vector<Target> targets;
    targets.reserve(qubits.size());
    for (uint32_t q : qubits) {
        targets.push_back(Target::qubit(q));
    }
    c.append(op, std::move(targets));
}

inline void add_tick(Circuit &c) {
    c.append(Op::TICK, {});
}

// Appends a measurement-family instruction and returns the absolute index
// of the first record it produces.
inline uint32_t add_measure(Circuit &c, Op op, const std::vector<uint32_t> &qubits) {
    uint32_t first = c.num_measurements;
    add_gate(c, op, qubits);
    return first;
}

}  // namespace qecforge

#endif
