#include <stdexcept>

#include "qecforge/sim/tableau.h"
#include "qecforge/transpile/transpile.h"

namespace qecforge {

namespace {

void run_unitaries(TableauSim &sim, const Circuit &c) {
    for (const auto &inst : c.instructions) {
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::tick || k == OpKind::detector || k == OpKind::observable) continue;
        if (!op_is_unitary(inst.op)) {
            throw std::invalid_argument("equivalence check needs a purely unitary circuit");
        }
        sim.apply_unitary(inst);
    }
}

bool row_bit(const std::vector<uint64_t> &bits, uint32_t q) {
    return (bits[q >> 6] >> (q & 63)) & 1;
}

void set_bit(std::vector<uint64_t> &bits, uint32_t q) {
    bits[q >> 6] |= uint64_t{1} << (q & 63);
}

}  // namespace

bool tableau_equivalent_mod_tracker(const Circuit &logical, const Circuit &physical,
                                    const TrackerLog &t) {
    uint32_t n_log = logical.num_qubits;
    if (t.initial_mapping.size() < n_log) return false;
    uint32_t n_phys = physical.num_qubits;
    for (uint32_t q = 0; q < n_log; q++) {
        n_phys = std::max(n_phys, t.initial_mapping[q] + 1);
        if (q < t.final_mapping.size()) n_phys = std::max(n_phys, t.final_mapping[q] + 1);
    }
    for (const auto &s : t.swaps) {
        n_phys = std::max({n_phys, s.phys_a + 1, s.phys_b + 1});
    }

    TableauSim sl(n_log);
    run_unitaries(sl, logical);
    TableauSim sp(n_phys);
    run_unitaries(sp, physical);

    // Content permutation: where the state initially on each physical qubit
    // ends up after the recorded swaps.
    std::vector<uint32_t> loc(n_phys), at(n_phys);
    for (uint32_t p = 0; p < n_phys; p++) loc[p] = at[p] = p;
    for (const auto &s : t.swaps) {
        uint32_t c1 = at[s.phys_a], c2 = at[s.phys_b];
        std::swap(at[s.phys_a], at[s.phys_b]);
        loc[c1] = s.phys_b;
        loc[c2] = s.phys_a;
    }

    size_t wp = (n_phys + 63) / 64;
    for (uint32_t q = 0; q < n_log; q++) {
        for (int which = 0; which < 2; which++) {
            TableauSim::PauliRow pl = which ? sl.z_image(q) : sl.x_image(q);
            TableauSim::PauliRow pp =
                which ? sp.z_image(t.initial_mapping[q]) : sp.x_image(t.initial_mapping[q]);
            std::vector<uint64_t> ex(wp, 0), ez(wp, 0);
            for (uint32_t l = 0; l < n_log; l++) {
                uint32_t dest = loc[t.initial_mapping[l]];
                if (row_bit(pl.x, l)) set_bit(ex, dest);
                if (row_bit(pl.z, l)) set_bit(ez, dest);
            }
            if (pl.sign != pp.sign) return false;
            for (size_t w = 0; w < wp; w++) {
                uint64_t px = w < pp.x.size() ? pp.x[w] : 0;
                uint64_t pz = w < pp.z.size() ? pp.z[w] : 0;
                if (px != ex[w] || pz != ez[w]) return false;
            }
        }
    }
    return true;
}

}  // namespace qecforge
