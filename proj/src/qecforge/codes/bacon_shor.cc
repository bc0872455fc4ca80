#include <algorithm>
#include <cstdint>
#include <vector>

#include "qecforge/codes/builder.h"
#include "qecforge/codes/codes.h"

namespace qecforge {

// Bacon-Shor on an m1 x m2 grid. Two-qubit gauge operators are measured
// directly: X gauges on horizontal neighbor pairs, Z gauges on vertical
// ones. Individual gauge outcomes are random; detectors only ever use the
// stabilizer products (all gauges between a column pair or a row pair),
// whose parities are deterministic.

namespace {

struct BsGrid {
    uint32_t m1, m2, n;  // rows, cols, data count
    uint32_t h_count, v_count;

    BsGrid(uint32_t m1, uint32_t m2)
        : m1(m1), m2(m2), n(m1 * m2), h_count(m1 * (m2 - 1)), v_count((m1 - 1) * m2) {}

    uint32_t data(uint32_t r, uint32_t c) const {
        return r * m2 + c;
    }
    // X gauge between (r,c) and (r,c+1)
    uint32_t h_anc(uint32_t r, uint32_t c) const {
        return n + r * (m2 - 1) + c;
    }
    // Z gauge between (r,c) and (r+1,c)
    uint32_t v_anc(uint32_t r, uint32_t c) const {
        return n + h_count + r * m2 + c;
    }
    uint32_t total() const {
        return n + h_count + v_count;
    }
};

}  // namespace

Circuit generate_bacon_shor_memory(uint32_t m1, uint32_t m2, uint32_t rounds) {
    BsGrid g(m1, m2);
    Circuit c;

    std::vector<uint32_t> all(g.total());
    for (uint32_t i = 0; i < all.size(); i++) {
        all[i] = i;
    }
    std::vector<uint32_t> h_ancs, v_ancs;
    std::vector<uint32_t> h_first, h_second, v_first, v_second;  // CX pair lists
    for (uint32_t r = 0; r < m1; r++) {
        for (uint32_t col = 0; col + 1 < m2; col++) {
            uint32_t anc = g.h_anc(r, col);
            h_ancs.push_back(anc);
            h_first.push_back(anc);
            h_first.push_back(g.data(r, col));
            h_second.push_back(anc);
            h_second.push_back(g.data(r, col + 1));
        }
    }
    for (uint32_t r = 0; r + 1 < m1; r++) {
        for (uint32_t col = 0; col < m2; col++) {
            uint32_t anc = g.v_anc(r, col);
            v_ancs.push_back(anc);
            v_first.push_back(g.data(r, col));
            v_first.push_back(anc);
            v_second.push_back(g.data(r + 1, col));
            v_second.push_back(anc);
        }
    }

    add_gate(c, Op::R, all);
    std::vector<uint32_t> prev_h(g.h_count), prev_v(g.v_count);
    for (uint32_t round = 0; round < rounds; round++) {
        add_tick(c);
        add_gate(c, Op::H, h_ancs);
        add_tick(c);
        add_gate(c, Op::CX, h_first);
        add_tick(c);
        add_gate(c, Op::CX, h_second);
        add_tick(c);
        add_gate(c, Op::H, h_ancs);
        add_tick(c);
        add_gate(c, Op::CX, v_first);
        add_tick(c);
        add_gate(c, Op::CX, v_second);
        add_tick(c);
        std::vector<uint32_t> both = h_ancs;
        both.insert(both.end(), v_ancs.begin(), v_ancs.end());
        uint32_t first = add_measure(c, Op::MR, both);
        uint32_t v_start = first + g.h_count;

        // X stabilizer between column pair (col, col+1): all rows' h gauges.
        if (round > 0) {
            for (uint32_t col = 0; col + 1 < m2; col++) {
                std::vector<uint32_t> refs;
                for (uint32_t r = 0; r < m1; r++) {
                    uint32_t idx = r * (m2 - 1) + col;
                    refs.push_back(prev_h[idx]);
                    refs.push_back(first + idx);
                }
                add_detector(c, refs);
            }
        }
        // Z stabilizer between row pair (r, r+1): all columns' v gauges.
        for (uint32_t r = 0; r + 1 < m1; r++) {
            std::vector<uint32_t> refs;
            for (uint32_t col = 0; col < m2; col++) {
                uint32_t idx = r * m2 + col;
                if (round > 0) {
                    refs.push_back(prev_v[idx]);
                }
                refs.push_back(v_start + idx);
            }
            add_detector(c, refs);
        }
        for (uint32_t i = 0; i < g.h_count; i++) {
            prev_h[i] = first + i;
        }
        for (uint32_t i = 0; i < g.v_count; i++) {
            prev_v[i] = v_start + i;
        }
    }

    add_tick(c);
    std::vector<uint32_t> data(g.n);
    for (uint32_t i = 0; i < g.n; i++) {
        data[i] = i;
    }
    uint32_t final_first = add_measure(c, Op::M, data);
    for (uint32_t r = 0; r + 1 < m1; r++) {
        std::vector<uint32_t> refs;
        for (uint32_t col = 0; col < m2; col++) {
            refs.push_back(final_first + g.data(r, col));
            refs.push_back(final_first + g.data(r + 1, col));
            refs.push_back(prev_v[r * m2 + col]);
        }
        add_detector(c, refs);
    }
    std::vector<uint32_t> obs;
    for (uint32_t col = 0; col < m2; col++) {
        obs.push_back(final_first + g.data(0, col));
    }
    add_observable(c, 0, obs);
    return c;
}

CodeLayout bacon_shor_layout(uint32_t m1, uint32_t m2) {
    BsGrid g(m1, m2);
    CodeLayout layout;
    layout.num_qubits = g.total();
    layout.coords.resize(g.total());
    for (uint32_t r = 0; r < m1; r++) {
        for (uint32_t col = 0; col < m2; col++) {
            uint32_t q = g.data(r, col);
            layout.data_qubits.push_back(q);
            layout.coords[q] = {2.0 * col, 2.0 * r};
        }
    }
    for (uint32_t r = 0; r < m1; r++) {
        for (uint32_t col = 0; col + 1 < m2; col++) {
            uint32_t q = g.h_anc(r, col);
            layout.ancilla_qubits.push_back(q);
            layout.coords[q] = {2.0 * col + 1, 2.0 * r};
        }
    }
    for (uint32_t r = 0; r + 1 < m1; r++) {
        for (uint32_t col = 0; col < m2; col++) {
            uint32_t q = g.v_anc(r, col);
            layout.ancilla_qubits.push_back(q);
            layout.coords[q] = {2.0 * col, 2.0 * r + 1};
        }
    }
    // Stabilizers, not gauges: X on column pairs, Z on row pairs.
    for (uint32_t col = 0; col + 1 < m2; col++) {
        Stabilizer s;
        s.is_x = true;
        for (uint32_t r = 0; r < m1; r++) {
            s.support.push_back(g.data(r, col));
            s.support.push_back(g.data(r, col + 1));
        }
        std::sort(s.support.begin(), s.support.end());
        layout.stabilizers.push_back(std::move(s));
    }
    for (uint32_t r = 0; r + 1 < m1; r++) {
        Stabilizer s;
        s.is_x = false;
        for (uint32_t col = 0; col < m2; col++) {
            s.support.push_back(g.data(r, col));
            s.support.push_back(g.data(r + 1, col));
        }
        std::sort(s.support.begin(), s.support.end());
        layout.stabilizers.push_back(std::move(s));
    }
    std::vector<uint32_t> logical;
    for (uint32_t col = 0; col < m2; col++) {
        logical.push_back(g.data(0, col));
    }
    layout.logical_z.push_back(logical);
    return layout;
}

}  // namespace qecforge
