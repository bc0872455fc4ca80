#ifndef QECFORGE_CIRCUIT_CIRCUIT_H
#define QECFORGE_CIRCUIT_CIRCUIT_H

#include <cstdint>
#include <string>
#include <vector>

namespace qecforge {

// Instruction set of the circuit IR. SWAP is first-class so routing output
// stays inspectable before gate-set translation.
enum class Op : uint8_t {
    X,
    Y,
    Z,
    H,
    S,
    S_DAG,
    SX,
    SX_DAG,
    RZ,  // RZ(k): rotation by k*pi/2 about Z, k in {0,1,2,3}
    CX,
    CZ,
    SWAP,
    RZZ,  // Clifford ZZ rotation (pi/2)
    M,
    MR,
    R,
    DEPOLARIZE1,
    DEPOLARIZE2,
    X_ERROR,
    Y_ERROR,
    Z_ERROR,
    PAULI_CHANNEL_1,  // PAULI_CHANNEL_1(px,py,pz)
    TICK,
    DETECTOR,
    OBSERVABLE_INCLUDE,
};

enum class OpKind : uint8_t {
    gate1,
    gate2,
    measure,        // M
    measure_reset,  // MR
    reset,          // R
    noise1,
    noise2,
    tick,
    detector,
    observable,
};

struct OpInfo {
    const char *name;
    OpKind kind;
    uint8_t num_params;
};

const OpInfo &op_info(Op op);
// Throws std::invalid_argument for unknown names.
Op op_from_name(const std::string &name);

inline bool op_is_unitary(Op op) {
    OpKind k = op_info(op).kind;
    return k == OpKind::gate1 || k == OpKind::gate2;
}
inline bool op_is_noise(Op op) {
    OpKind k = op_info(op).kind;
    return k == OpKind::noise1 || k == OpKind::noise2;
}
inline bool op_produces_record(Op op) {
    OpKind k = op_info(op).kind;
    return k == OpKind::measure || k == OpKind::measure_reset;
}
inline bool op_is_two_qubit(Op op) {
    OpKind k = op_info(op).kind;
    return k == OpKind::gate2 || k == OpKind::noise2;
}

// A target is either a qubit index or a measurement-record back-reference
// rec[-k] (k >= 1, counted from the end of the record stream so far).
struct Target {
    uint32_t value = 0;
    bool is_rec = false;

    static Target qubit(uint32_t q) {
        return Target{q, false};
    }
    static Target rec(uint32_t k) {
        return Target{k, true};
    }
    bool operator==(const Target &o) const {
        return value == o.value && is_rec == o.is_rec;
    }
};

struct Instruction {
    Op op;
    std::vector<double> params;
    std::vector<Target> targets;

    bool operator==(const Instruction &o) const {
        return op == o.op && params == o.params && targets == o.targets;
    }
};

struct Circuit {
    std::vector<Instruction> instructions;
    uint32_t num_qubits = 0;
    uint32_t num_measurements = 0;
    uint32_t num_detectors = 0;
    uint32_t num_observables = 0;

    // Validates the instruction against the IR rules and updates counters.
    // Throws std::invalid_argument on violation.
    void append(Op op, std::vector<Target> targets, std::vector<double> params = {});
    void append(const Instruction &inst) {
        append(inst.op, inst.targets, inst.params);
    }
    // Appends every instruction of `other`, revalidating record references.
    void append_circuit(const Circuit &other);

    bool operator==(const Circuit &o) const {
        return instructions == o.instructions;
    }
};

// Text round trip. parse(emit(c)) == c and emit is canonical.
Circuit parse_circuit(const std::string &text);
std::string emit_circuit(const Circuit &c);

// One emitted line for a single instruction (no trailing newline).
std::string emit_instruction(const Instruction &inst);

// Detector/observable definitions resolved to absolute measurement-record
// indices (0 = first measurement in the circuit).
struct ResolvedRecords {
    std::vector<std::vector<uint32_t>> detectors;
    std::vector<std::vector<uint32_t>> observables;
};
ResolvedRecords resolve_records(const Circuit &c);

// Strips noise channels, keeping everything else (used to build the
// noiseless reference of a noisy circuit).
Circuit strip_noise(const Circuit &c);

// Counts of interest for overhead reporting.
uint32_t count_ops(const Circuit &c);       // gates + measures + resets (per pair for 2q)
uint32_t count_2q_gates(const Circuit &c);  // CX/CZ/SWAP/RZZ pairs
uint32_t count_swaps(const Circuit &c);

}  // namespace qecforge

#endif
