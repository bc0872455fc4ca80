#include "qecforge/bench/bench.h"
#include "qecforge/codes/builder.h"

namespace qecforge {

namespace {

void idle_layer(Circuit &c, double p_idle, const std::vector<uint32_t> &qubits) {
    if (p_idle <= 0 || qubits.empty()) return;
    std::vector<Target> t;
    for (uint32_t q : qubits) t.push_back(Target::qubit(q));
    c.append(Op::DEPOLARIZE1, std::move(t), {p_idle});
}

void noisy_cx(Circuit &c, double p_gate, uint32_t a, uint32_t b) {
    add_gate(c, Op::CX, {a, b});
    if (p_gate > 0) {
        c.append(Op::DEPOLARIZE2, {Target::qubit(a), Target::qubit(b)}, {p_gate});
    }
}

}  // namespace

// Distance-3 repetition protection of one idle qubit: encode q0 onto
// {q0,q1,q2} with two CX layers, one extraction round of Z0Z1/Z1Z2 onto
// ancillas {q3,q4}, read the ancillas out. Every layer depolarizes the
// qubits it leaves inactive; resets and the final data readout are taken
// clean so the error sources are exactly the ones the linear estimate
// counts (five idle slots on the protected qubit's worldline, six gates,
// two readouts). The readout parity of the three data qubits is the
// corruption witness.
Circuit repetition_idle_gadget(double p_idle, double p_gate, double p_meas) {
    Circuit c;
    add_gate(c, Op::R, {0, 1, 2, 3, 4});
    add_tick(c);

    noisy_cx(c, p_gate, 0, 1);
    idle_layer(c, p_idle, {2, 3, 4});
    add_tick(c);
    noisy_cx(c, p_gate, 0, 2);
    idle_layer(c, p_idle, {1, 3, 4});
    add_tick(c);

    noisy_cx(c, p_gate, 0, 3);
    noisy_cx(c, p_gate, 1, 4);
    idle_layer(c, p_idle, {2});
    add_tick(c);
    noisy_cx(c, p_gate, 1, 3);
    noisy_cx(c, p_gate, 2, 4);
    idle_layer(c, p_idle, {0});
    add_tick(c);

    if (p_meas > 0) {
        c.append(Op::X_ERROR, {Target::qubit(3), Target::qubit(4)}, {p_meas});
    }
    idle_layer(c, p_idle, {0, 1, 2});
    uint32_t anc = add_measure(c, Op::M, {3, 4});
    add_detector(c, {anc});
    add_detector(c, {anc + 1});
    add_tick(c);

    uint32_t data = add_measure(c, Op::M, {0, 1, 2});
    add_observable(c, 0, {data, data + 1, data + 2});
    return c;
}

// The comparison qubit: same five time steps, nothing but its own idle
// noise, readout flip as the error witness.
Circuit unprotected_idle_circuit(double p_idle) {
    Circuit c;
    add_gate(c, Op::R, {0});
    for (int layer = 0; layer < 5; layer++) {
        add_tick(c);
        idle_layer(c, p_idle, {0});
    }
    add_tick(c);
    uint32_t m = add_measure(c, Op::M, {0});
    add_observable(c, 0, {m});
    return c;
}

}  // namespace qecforge
