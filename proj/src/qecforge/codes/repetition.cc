#include <cstdint>
#include <vector>

#include "qecforge/codes/builder.h"
#include "qecforge/codes/codes.h"

namespace qecforge {

// Bit-flip repetition code on a line. Data qubits sit at even positions
// 0, 2, ..., 2(d-1); the ancilla between data i and i+1 is 2i+1. The
// observable is the final measurement of data qubit 0.

Circuit generate_repetition_memory(uint32_t d, uint32_t rounds) {
    uint32_t n = 2 * d - 1;
    uint32_t a = d - 1;  // ancilla count
    std::vector<uint32_t> all(n), ancillas(a), data(d);
    for (uint32_t i = 0; i < n; i++) {
        all[i] = i;
    }
    for (uint32_t i = 0; i < d; i++) {
        data[i] = 2 * i;
    }
    for (uint32_t i = 0; i < a; i++) {
        ancillas[i] = 2 * i + 1;
    }

    Circuit c;
    add_gate(c, Op::R, all);
    std::vector<uint32_t> prev_round(a);
    for (uint32_t round = 0; round < rounds; round++) {
        add_tick(c);
        std::vector<uint32_t> left, right;
        for (uint32_t i = 0; i < a; i++) {
            left.push_back(2 * i);
            left.push_back(2 * i + 1);
            right.push_back(2 * i + 2);
            right.push_back(2 * i + 1);
        }
        add_gate(c, Op::CX, left);
        add_tick(c);
        add_gate(c, Op::CX, right);
        add_tick(c);
        uint32_t first = add_measure(c, Op::MR, ancillas);
        for (uint32_t i = 0; i < a; i++) {
            if (round == 0) {
                add_detector(c, {first + i});
            } else {
                add_detector(c, {prev_round[i], first + i});
            }
            prev_round[i] = first + i;
        }
    }
    add_tick(c);
    uint32_t final_first = add_measure(c, Op::M, data);
    for (uint32_t i = 0; i < a; i++) {
        add_detector(c, {final_first + i, final_first + i + 1, prev_round[i]});
    }
    add_observable(c, 0, {final_first});
    return c;
}

CodeLayout repetition_layout(uint32_t d) {
    CodeLayout layout;
    layout.num_qubits = 2 * d - 1;
    layout.coords.resize(layout.num_qubits);
    for (uint32_t i = 0; i < layout.num_qubits; i++) {
        layout.coords[i] = {(double)i, 0.0};
        if (i % 2 == 0) {
            layout.data_qubits.push_back(i);
        } else {
            layout.ancilla_qubits.push_back(i);
        }
    }
    for (uint32_t i = 0; i + 1 < d; i++) {
        layout.stabilizers.push_back({false, {2 * i, 2 * i + 2}});
    }
    layout.logical_z.push_back({0});
    return layout;
}

}  // namespace qecforge
