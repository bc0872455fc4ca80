#include <algorithm>
#include <cstdint>
#include <vector>

#include "qecforge/codes/builder.h"
#include "qecforge/codes/codes.h"

namespace qecforge {

// Concatenated Steane code with 7^level data qubits. Stabilizers exist at
// every concatenation level: a level-L stabilizer applies a Hamming parity
// row to the seven level-(L-1) sub-blocks of a block, with each logical
// Pauli expanded to the all-qubit representative, giving weight 4*7^(L-1).
// Every stabilizer is measured through its own ancilla once per round.

namespace {

const uint32_t kParityRows[3][4] = {
    {0, 2, 4, 6},
    {1, 2, 5, 6},
    {3, 4, 5, 6},
};

uint32_t pow7(uint32_t e) {
    uint32_t v = 1;
    while (e--) {
        v *= 7;
    }
    return v;
}

struct SteaneStab {
    bool is_x;
    std::vector<uint32_t> support;  // data qubit ids
};

std::vector<SteaneStab> enumerate_stabilizers(uint32_t level) {
    std::vector<SteaneStab> stabs;
    uint32_t n = pow7(level);
    for (uint32_t lv = 1; lv <= level; lv++) {
        uint32_t block_size = pow7(lv);
        uint32_t sub_size = block_size / 7;
        for (uint32_t block = 0; block < n / block_size; block++) {
            for (bool is_x : {true, false}) {
                for (const auto &row : kParityRows) {
                    SteaneStab s;
                    s.is_x = is_x;
                    for (uint32_t p = 0; p < 4; p++) {
                        uint32_t sub_start = block * block_size + row[p] * sub_size;
                        for (uint32_t q = 0; q < sub_size; q++) {
                            s.support.push_back(sub_start + q);
                        }
                    }
                    std::sort(s.support.begin(), s.support.end());
                    stabs.push_back(std::move(s));
                }
            }
        }
    }
    return stabs;
}

}  // namespace

Circuit generate_steane_memory(uint32_t level, uint32_t rounds) {
    uint32_t n = pow7(level);
    std::vector<SteaneStab> stabs = enumerate_stabilizers(level);
    uint32_t num_anc = (uint32_t)stabs.size();  // 7^level - 1

    Circuit c;
    std::vector<uint32_t> all(n + num_anc);
    for (uint32_t i = 0; i < all.size(); i++) {
        all[i] = i;
    }
    add_gate(c, Op::R, all);

    std::vector<uint32_t> ancillas(num_anc);
    for (uint32_t i = 0; i < num_anc; i++) {
        ancillas[i] = n + i;
    }

    std::vector<uint32_t> prev(num_anc);
    for (uint32_t round = 0; round < rounds; round++) {
        // X stabilizers first, then Z, each through its own ancilla.
        for (bool x_pass : {true, false}) {
            for (uint32_t s = 0; s < num_anc; s++) {
                if (stabs[s].is_x != x_pass) {
                    continue;
                }
                uint32_t anc = ancillas[s];
                add_tick(c);
                if (x_pass) {
                    add_gate(c, Op::H, {anc});
                    std::vector<uint32_t> pairs;
                    for (uint32_t q : stabs[s].support) {
                        pairs.push_back(anc);
                        pairs.push_back(q);
                    }
                    add_gate(c, Op::CX, pairs);
                    add_gate(c, Op::H, {anc});
                } else {
                    std::vector<uint32_t> pairs;
                    for (uint32_t q : stabs[s].support) {
                        pairs.push_back(q);
                        pairs.push_back(anc);
                    }
                    add_gate(c, Op::CX, pairs);
                }
            }
        }
        add_tick(c);
        uint32_t first = add_measure(c, Op::MR, ancillas);
        for (uint32_t s = 0; s < num_anc; s++) {
            if (round == 0) {
                if (!stabs[s].is_x) {
                    add_detector(c, {first + s});
                }
            } else {
                add_detector(c, {prev[s], first + s});
            }
            prev[s] = first + s;
        }
    }

    add_tick(c);
    std::vector<uint32_t> data(n);
    for (uint32_t i = 0; i < n; i++) {
        data[i] = i;
    }
    uint32_t final_first = add_measure(c, Op::M, data);
    for (uint32_t s = 0; s < num_anc; s++) {
        if (stabs[s].is_x) {
            continue;
        }
        std::vector<uint32_t> refs;
        for (uint32_t q : stabs[s].support) {
            refs.push_back(final_first + q);
        }
        refs.push_back(prev[s]);
        add_detector(c, refs);
    }
    std::vector<uint32_t> obs(n);
    for (uint32_t i = 0; i < n; i++) {
        obs[i] = final_first + i;
    }
    add_observable(c, 0, obs);
    return c;
}

CodeLayout steane_layout(uint32_t level) {
    uint32_t n = pow7(level);
    std::vector<SteaneStab> stabs = enumerate_stabilizers(level);
    CodeLayout layout;
    layout.num_qubits = n + (uint32_t)stabs.size();
    layout.coords.resize(layout.num_qubits);
    for (uint32_t q = 0; q < n; q++) {
        layout.data_qubits.push_back(q);
        layout.coords[q] = {(double)q, 0.0};
    }
    for (uint32_t a = 0; a < stabs.size(); a++) {
        layout.ancilla_qubits.push_back(n + a);
        layout.coords[n + a] = {(double)a, 1.0};
    }
    for (auto &s : stabs) {
        layout.stabilizers.push_back({s.is_x, s.support});
    }
    std::vector<uint32_t> logical(n);
    for (uint32_t q = 0; q < n; q++) {
        logical[q] = q;
    }
    layout.logical_z.push_back(logical);
    return layout;
}

}  // namespace qecforge
