#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qecforge/codes/builder.h"
#include "qecforge/codes/codes.h"
#include "qecforge/util/gf2.h"

namespace qecforge {

// Bivariate bicycle code on an l x m torus with check polynomials A and B:
// H_X = [A | B], H_Z = [B^T | A^T] acting on the left/right data blocks.
// The default polynomials A = x^3 + y + y^2, B = y^3 + x + x^2 give the
// [[144,12,12]] gross code. Each weight-(|A|+|B|) check is measured through
// one ancilla; the CX schedule walks the polynomial terms so each step is a
// full parallel layer (cyclic shifts never collide).

namespace {

struct BbIndex {
    uint32_t l, m, n;  // n = l*m per block

    uint32_t left(uint32_t i, uint32_t j) const {
        return i * m + j;
    }
    uint32_t right(uint32_t i, uint32_t j) const {
        return n + i * m + j;
    }
    uint32_t x_anc(uint32_t i, uint32_t j) const {
        return 2 * n + i * m + j;
    }
    uint32_t z_anc(uint32_t i, uint32_t j) const {
        return 3 * n + i * m + j;
    }
};

// Data qubit hit by one polynomial term of the check at (i, j).
uint32_t term_target(
    const BbIndex &ix, bool x_check, bool left_block, std::pair<uint32_t, uint32_t> term,
    uint32_t i, uint32_t j) {
    uint32_t a = term.first, b = term.second;
    uint32_t ti, tj;
    if (x_check) {
        ti = (i + a) % ix.l;
        tj = (j + b) % ix.m;
    } else {
        // Transposed shift: x^a y^b acts as x^-a y^-b.
        ti = (i + ix.l - a % ix.l) % ix.l;
        tj = (j + ix.m - b % ix.m) % ix.m;
    }
    return left_block ? ix.left(ti, tj) : ix.right(ti, tj);
}

// The six (block, term) steps of a check's schedule. X checks apply A on
// the left block and B on the right; Z checks apply B^T and A^T.
std::vector<std::pair<bool, std::pair<uint32_t, uint32_t>>> check_steps(
    const CodeSpec &spec, bool x_check) {
    std::vector<std::pair<bool, std::pair<uint32_t, uint32_t>>> steps;
    if (x_check) {
        for (auto t : spec.bb_a) {
            steps.push_back({true, t});
        }
        for (auto t : spec.bb_b) {
            steps.push_back({false, t});
        }
    } else {
        for (auto t : spec.bb_b) {
            steps.push_back({true, t});
        }
        for (auto t : spec.bb_a) {
            steps.push_back({false, t});
        }
    }
    return steps;
}

std::vector<uint32_t> check_support(
    const BbIndex &ix, const CodeSpec &spec, bool x_check, uint32_t i, uint32_t j) {
    std::vector<uint32_t> support;
    for (auto &[left_block, term] : check_steps(spec, x_check)) {
        support.push_back(term_target(ix, x_check, left_block, term, i, j));
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    return support;
}

BitMat check_matrix(const BbIndex &ix, const CodeSpec &spec, bool x_check) {
    BitMat h(ix.n, 2 * ix.n);
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            for (uint32_t q : check_support(ix, spec, x_check, i, j)) {
                h.set(i * ix.m + j, q, true);
            }
        }
    }
    return h;
}

// Logical Z representatives: kernel of H_X modulo the row space of H_Z.
std::vector<std::vector<uint32_t>> bb_logical_z(const BbIndex &ix, const CodeSpec &spec) {
    BitMat hx = check_matrix(ix, spec, true);
    BitMat hz = check_matrix(ix, spec, false);
    std::vector<uint32_t> z_pivots;
    gf2_rref(hz, &z_pivots);

    std::vector<std::vector<uint32_t>> logicals;
    std::vector<std::vector<uint64_t>> independent;  // accumulated reduced rows
    size_t wpr = (2 * ix.n + 63) / 64;
    auto reduce_and_try_add = [&](std::vector<uint64_t> vec) {
        for (auto &row : independent) {
            uint32_t lead = 0;
            bool found = false;
            for (size_t k = 0; k < wpr && !found; k++) {
                if (row[k]) {
                    lead = (uint32_t)(k * 64 + __builtin_ctzll(row[k]));
                    found = true;
                }
            }
            if (found && ((vec[lead >> 6] >> (lead & 63)) & 1)) {
                for (size_t k = 0; k < wpr; k++) {
                    vec[k] ^= row[k];
                }
            }
        }
        for (size_t k = 0; k < wpr; k++) {
            if (vec[k]) {
                independent.push_back(vec);
                return true;
            }
        }
        return false;
    };

    for (auto &kvec : gf2_kernel(hx)) {
        std::vector<uint64_t> vec(wpr, 0);
        for (uint32_t q : kvec) {
            vec[q >> 6] |= 1ULL << (q & 63);
        }
        std::vector<uint32_t> residual = gf2_reduce_against(hz, z_pivots, vec);
        if (residual.empty()) {
            continue;  // stabilizer product
        }
        std::vector<uint64_t> rvec(wpr, 0);
        for (uint32_t q : residual) {
            rvec[q >> 6] |= 1ULL << (q & 63);
        }
        if (reduce_and_try_add(rvec)) {
            logicals.push_back(residual);
        }
    }
    return logicals;
}

}  // namespace

Circuit generate_bb_memory(const CodeSpec &spec) {
    BbIndex ix{spec.bb_l, spec.bb_m, spec.bb_l * spec.bb_m};
    uint32_t rounds = spec.rounds_or_default();
    std::vector<std::vector<uint32_t>> logicals = bb_logical_z(ix, spec);
    if (logicals.empty()) {
        throw std::invalid_argument("check polynomials encode no logical qubits");
    }

    Circuit c;
    std::vector<uint32_t> all(4 * ix.n);
    for (uint32_t i = 0; i < all.size(); i++) {
        all[i] = i;
    }
    add_gate(c, Op::R, all);

    std::vector<uint32_t> x_ancs, z_ancs;
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            x_ancs.push_back(ix.x_anc(i, j));
            z_ancs.push_back(ix.z_anc(i, j));
        }
    }
    auto x_steps = check_steps(spec, true);
    auto z_steps = check_steps(spec, false);

    std::vector<uint32_t> prev_x(ix.n), prev_z(ix.n);
    for (uint32_t round = 0; round < rounds; round++) {
        add_tick(c);
        add_gate(c, Op::H, x_ancs);
        add_tick(c);
        for (auto &[left_block, term] : x_steps) {
            std::vector<uint32_t> pairs;
            for (uint32_t i = 0; i < ix.l; i++) {
                for (uint32_t j = 0; j < ix.m; j++) {
                    pairs.push_back(ix.x_anc(i, j));
                    pairs.push_back(term_target(ix, true, left_block, term, i, j));
                }
            }
            add_gate(c, Op::CX, pairs);
            add_tick(c);
        }
        add_gate(c, Op::H, x_ancs);
        add_tick(c);
        for (auto &[left_block, term] : z_steps) {
            std::vector<uint32_t> pairs;
            for (uint32_t i = 0; i < ix.l; i++) {
                for (uint32_t j = 0; j < ix.m; j++) {
                    pairs.push_back(term_target(ix, false, left_block, term, i, j));
                    pairs.push_back(ix.z_anc(i, j));
                }
            }
            add_gate(c, Op::CX, pairs);
            add_tick(c);
        }
        std::vector<uint32_t> both = x_ancs;
        both.insert(both.end(), z_ancs.begin(), z_ancs.end());
        uint32_t first = add_measure(c, Op::MR, both);
        uint32_t z_start = first + ix.n;
        for (uint32_t k = 0; k < ix.n; k++) {
            if (round > 0) {
                add_detector(c, {prev_x[k], first + k});
            }
            prev_x[k] = first + k;
        }
        for (uint32_t k = 0; k < ix.n; k++) {
            if (round == 0) {
                add_detector(c, {z_start + k});
            } else {
                add_detector(c, {prev_z[k], z_start + k});
            }
            prev_z[k] = z_start + k;
        }
    }

    add_tick(c);
    std::vector<uint32_t> data(2 * ix.n);
    for (uint32_t i = 0; i < data.size(); i++) {
        data[i] = i;
    }
    uint32_t final_first = add_measure(c, Op::M, data);
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            std::vector<uint32_t> refs;
            for (uint32_t q : check_support(ix, spec, false, i, j)) {
                refs.push_back(final_first + q);
            }
            refs.push_back(prev_z[i * ix.m + j]);
            add_detector(c, refs);
        }
    }
    for (uint32_t k = 0; k < logicals.size(); k++) {
        std::vector<uint32_t> refs;
        for (uint32_t q : logicals[k]) {
            refs.push_back(final_first + q);
        }
        add_observable(c, k, refs);
    }
    return c;
}

CodeLayout bb_layout(const CodeSpec &spec) {
    BbIndex ix{spec.bb_l, spec.bb_m, spec.bb_l * spec.bb_m};
    CodeLayout layout;
    layout.num_qubits = 4 * ix.n;
    layout.coords.resize(layout.num_qubits);
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            layout.data_qubits.push_back(ix.left(i, j));
            layout.data_qubits.push_back(ix.right(i, j));
            layout.ancilla_qubits.push_back(ix.x_anc(i, j));
            layout.ancilla_qubits.push_back(ix.z_anc(i, j));
            layout.coords[ix.left(i, j)] = {2.0 * i, 2.0 * j};
            layout.coords[ix.right(i, j)] = {2.0 * i + 1, 2.0 * j + 1};
            layout.coords[ix.x_anc(i, j)] = {2.0 * i + 1, 2.0 * j};
            layout.coords[ix.z_anc(i, j)] = {2.0 * i, 2.0 * j + 1};
        }
    }
    std::sort(layout.data_qubits.begin(), layout.data_qubits.end());
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            layout.stabilizers.push_back({true, check_support(ix, spec, true, i, j)});
        }
    }
    for (uint32_t i = 0; i < ix.l; i++) {
        for (uint32_t j = 0; j < ix.m; j++) {
            layout.stabilizers.push_back({false, check_support(ix, spec, false, i, j)});
        }
    }
    layout.logical_z = bb_logical_z(ix, spec);
    return layout;
}

}  // namespace qecforge
