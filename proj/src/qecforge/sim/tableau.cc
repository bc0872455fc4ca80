#include "qecforge/sim/tableau.h"

#include <bit>
#include <stdexcept>

#include "qecforge/util/rng.h"

namespace qecforge {

TableauSim::TableauSim(size_t n) : n(n), w((n + 63) / 64) {
    xs.assign(2 * n * w, 0);
    zs.assign(2 * n * w, 0);
    rs.assign(2 * n, 0);
    tmp_x.assign(w, 0);
    tmp_z.assign(w, 0);
    for (size_t i = 0; i < n; i++) {
        xs[i * w + (i >> 6)] |= 1ULL << (i & 63);
        zs[(n + i) * w + (i >> 6)] |= 1ULL << (i & 63);
    }
}

void TableauSim::do_h(uint32_t q) {
    size_t word = q >> 6;
    uint64_t bit = 1ULL << (q & 63);
    for (size_t r = 0; r < 2 * n; r++) {
        uint64_t &x = xs[r * w + word];
        uint64_t &z = zs[r * w + word];
        rs[r] ^= ((x & z) >> (q & 63)) & 1;
        uint64_t diff = (x ^ z) & bit;
        x ^= diff;
        z ^= diff;
    }
}

void TableauSim::do_s(uint32_t q) {
    size_t word = q >> 6;
    uint64_t bit = 1ULL << (q & 63);
    for (size_t r = 0; r < 2 * n; r++) {
        uint64_t x = xs[r * w + word];
        uint64_t &z = zs[r * w + word];
        rs[r] ^= ((x & z) >> (q & 63)) & 1;
        z ^= x & bit;
    }
}

void TableauSim::do_s_dag(uint32_t q) {
    size_t word = q >> 6;
    uint64_t bit = 1ULL << (q & 63);
    for (size_t r = 0; r < 2 * n; r++) {
        uint64_t x = xs[r * w + word];
        uint64_t &z = zs[r * w + word];
        rs[r] ^= ((x & ~z) >> (q & 63)) & 1;
        z ^= x & bit;
    }
}

void TableauSim::do_x(uint32_t q) {
    size_t word = q >> 6;
    for (size_t r = 0; r < 2 * n; r++) {
        rs[r] ^= (zs[r * w + word] >> (q & 63)) & 1;
    }
}

void TableauSim::do_y(uint32_t q) {
    size_t word = q >> 6;
    for (size_t r = 0; r < 2 * n; r++) {
        rs[r] ^= ((xs[r * w + word] ^ zs[r * w + word]) >> (q & 63)) & 1;
    }
}

void TableauSim::do_z(uint32_t q) {
    size_t word = q >> 6;
    for (size_t r = 0; r < 2 * n; r++) {
        rs[r] ^= (xs[r * w + word] >> (q & 63)) & 1;
    }
}

void TableauSim::do_cx(uint32_t c, uint32_t t) {
    size_t wc = c >> 6, wt = t >> 6;
    int sc = c & 63, st = t & 63;
    for (size_t r = 0; r < 2 * n; r++) {
        uint64_t xc = (xs[r * w + wc] >> sc) & 1;
        uint64_t zc = (zs[r * w + wc] >> sc) & 1;
        uint64_t xt = (xs[r * w + wt] >> st) & 1;
        uint64_t zt = (zs[r * w + wt] >> st) & 1;
        rs[r] ^= xc & zt & (xt ^ zc ^ 1);
        xs[r * w + wt] ^= (xc << st);
        zs[r * w + wc] ^= (zt << sc);
    }
}

void TableauSim::apply_unitary(const Instruction &inst) {
    const auto &ts = inst.targets;
    switch (inst.op) {
        case Op::X:
            for (auto &t : ts) do_x(t.value);
            break;
        case Op::Y:
            for (auto &t : ts) do_y(t.value);
            break;
        case Op::Z:
            for (auto &t : ts) do_z(t.value);
            break;
        case Op::H:
            for (auto &t : ts) do_h(t.value);
            break;
        case Op::S:
            for (auto &t : ts) do_s(t.value);
            break;
        case Op::S_DAG:
            for (auto &t : ts) do_s_dag(t.value);
            break;
        case Op::SX:
            for (auto &t : ts) {
                do_h(t.value);
                do_s(t.value);
                do_h(t.value);
            }
            break;
        case Op::SX_DAG:
            for (auto &t : ts) {
                do_h(t.value);
                do_s_dag(t.value);
                do_h(t.value);
            }
            break;
        case Op::RZ: {
            int k = (int)inst.params[0];
            for (auto &t : ts) {
                if (k == 1) {
                    do_s(t.value);
                } else if (k == 2) {
                    do_z(t.value);
                } else if (k == 3) {
                    do_s_dag(t.value);
                }
            }
            break;
        }
        case Op::CX:
            for (size_t i = 0; i < ts.size(); i += 2) do_cx(ts[i].value, ts[i + 1].value);
            break;
        case Op::CZ:
            for (size_t i = 0; i < ts.size(); i += 2) {
                do_h(ts[i + 1].value);
                do_cx(ts[i].value, ts[i + 1].value);
                do_h(ts[i + 1].value);
            }
            break;
        case Op::SWAP:
            for (size_t i = 0; i < ts.size(); i += 2) {
                do_cx(ts[i].value, ts[i + 1].value);
                do_cx(ts[i + 1].value, ts[i].value);
                do_cx(ts[i].value, ts[i + 1].value);
            }
            break;
        case Op::RZZ:
            for (size_t i = 0; i < ts.size(); i += 2) {
                do_cx(ts[i].value, ts[i + 1].value);
                do_s(ts[i + 1].value);
                do_cx(ts[i].value, ts[i + 1].value);
            }
            break;
        default:
            throw std::invalid_argument("apply_unitary on non-unitary instruction");
    }
}

int TableauSim::rowsum_phase(const uint64_t *xi, const uint64_t *zi, const uint64_t *xh, const uint64_t *zh) const {
    int acc = 0;
    for (size_t k = 0; k < w; k++) {
        uint64_t x1 = xi[k], z1 = zi[k], x2 = xh[k], z2 = zh[k];
        uint64_t y1 = x1 & z1;
        uint64_t x1o = x1 & ~z1;
        uint64_t z1o = ~x1 & z1;
        uint64_t plus = (x1o & x2 & z2) | (z1o & x2 & ~z2) | (y1 & z2 & ~x2);
        uint64_t minus = (x1o & ~x2 & z2) | (z1o & x2 & z2) | (y1 & x2 & ~z2);
        acc += std::popcount(plus) - std::popcount(minus);
    }
    return acc;
}

void TableauSim::rowsum(size_t h, size_t i) {
    int acc = 2 * (int)rs[h] + 2 * (int)rs[i];
    acc += rowsum_phase(&xs[i * w], &zs[i * w], &xs[h * w], &zs[h * w]);
    acc &= 3;
    rs[h] = (uint8_t)(acc >> 1);
    for (size_t k = 0; k < w; k++) {
        xs[h * w + k] ^= xs[i * w + k];
        zs[h * w + k] ^= zs[i * w + k];
    }
}

TableauSim::MeasureResult TableauSim::measure(uint32_t q, bool coin) {
    size_t p = 2 * n;
    for (size_t r = n; r < 2 * n; r++) {
        if (xbit(r, q)) {
            p = r;
            break;
        }
    }
    if (p < 2 * n) {
        for (size_t r = 0; r < 2 * n; r++) {
            if (r != p && xbit(r, q)) {
                rowsum(r, p);
            }
        }
        // Old stabilizer becomes the paired destabilizer; new stabilizer
        // is +/- Z_q with the coin as sign.
        size_t d = p - n;
        for (size_t k = 0; k < w; k++) {
            xs[d * w + k] = xs[p * w + k];
            zs[d * w + k] = zs[p * w + k];
            xs[p * w + k] = 0;
            zs[p * w + k] = 0;
        }
        rs[d] = rs[p];
        zs[p * w + (q >> 6)] |= 1ULL << (q & 63);
        rs[p] = coin;
        return {coin, true};
    }
    // Deterministic: accumulate the product of stabilizers flagged by
    // destabilizer x-bits into the scratch row.
    for (size_t k = 0; k < w; k++) {
        tmp_x[k] = 0;
        tmp_z[k] = 0;
    }
    int acc = 0;
    for (size_t i = 0; i < n; i++) {
        if (xbit(i, q)) {
            acc += 2 * (int)rs[n + i];
            acc += rowsum_phase(&xs[(n + i) * w], &zs[(n + i) * w], tmp_x.data(), tmp_z.data());
            for (size_t k = 0; k < w; k++) {
                tmp_x[k] ^= xs[(n + i) * w + k];
                tmp_z[k] ^= zs[(n + i) * w + k];
            }
            acc &= 3;
        }
    }
    return {(acc >> 1) != 0, false};
}

TableauSim::MeasureResult TableauSim::reset(uint32_t q, bool coin) {
    MeasureResult m = measure(q, coin);
    if (m.value) {
        do_x(q);
    }
    return m;
}

TableauSim::PauliRow TableauSim::x_image(uint32_t q) const {
    PauliRow row;
    row.x.assign(xs.begin() + q * w, xs.begin() + (q + 1) * w);
    row.z.assign(zs.begin() + q * w, zs.begin() + (q + 1) * w);
    row.sign = rs[q] != 0;
    return row;
}

TableauSim::PauliRow TableauSim::z_image(uint32_t q) const {
    PauliRow row;
    row.x.assign(xs.begin() + (n + q) * w, xs.begin() + (n + q + 1) * w);
    row.z.assign(zs.begin() + (n + q) * w, zs.begin() + (n + q + 1) * w);
    row.sign = rs[n + q] != 0;
    return row;
}

bool TableauSim::check_symplectic() const {
    auto anticommutes = [&](size_t a, size_t b) {
        int acc = 0;
        for (size_t k = 0; k < w; k++) {
            acc ^= std::popcount((xs[a * w + k] & zs[b * w + k]) ^ (zs[a * w + k] & xs[b * w + k])) & 1;
        }
        return acc != 0;
    };
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            bool want = i == j;
            if (anticommutes(i, n + j) != want) {
                return false;
            }
            if (anticommutes(i, j) || anticommutes(n + i, n + j)) {
                return false;
            }
        }
    }
    return true;
}

TableauRunResult tableau_run(const Circuit &c, uint64_t seed, uint64_t shot) {
    TableauSim sim(c.num_qubits > 0 ? c.num_qubits : 1);
    TableauRunResult out;
    out.records.reserve(c.num_measurements);
    out.record_random.reserve(c.num_measurements);

    for (size_t idx = 0; idx < c.instructions.size(); idx++) {
        const Instruction &inst = c.instructions[idx];
        CounterRng rng(seed ^ 0xC1BC41u, shot * 0x100000000ULL + idx);
        switch (op_info(inst.op).kind) {
            case OpKind::gate1:
            case OpKind::gate2:
                sim.apply_unitary(inst);
                break;
            case OpKind::measure:
                for (const Target &t : inst.targets) {
                    auto m = sim.measure(t.value, rng.next_bernoulli(0.5));
                    out.records.push_back(m.value);
                    out.record_random.push_back(m.random);
                }
                break;
            case OpKind::measure_reset:
                for (const Target &t : inst.targets) {
                    auto m = sim.measure(t.value, rng.next_bernoulli(0.5));
                    out.records.push_back(m.value);
                    out.record_random.push_back(m.random);
                    if (m.value) {
                        sim.do_x(t.value);
                    }
                }
                break;
            case OpKind::reset:
                for (const Target &t : inst.targets) {
                    sim.reset(t.value, rng.next_bernoulli(0.5));
                }
                break;
            case OpKind::noise1:
                for (const Target &t : inst.targets) {
                    double u = rng.next_unit();
                    int comp = 0;  // 0 none, 1 X, 2 Y, 3 Z
                    if (inst.op == Op::DEPOLARIZE1) {
                        double p = inst.params[0];
                        if (u < p) {
                            comp = 1 + (int)(u / (p / 3.0));
                            comp = comp > 3 ? 3 : comp;
                        }
                    } else if (inst.op == Op::X_ERROR) {
                        comp = u < inst.params[0] ? 1 : 0;
                    } else if (inst.op == Op::Y_ERROR) {
                        comp = u < inst.params[0] ? 2 : 0;
                    } else if (inst.op == Op::Z_ERROR) {
                        comp = u < inst.params[0] ? 3 : 0;
                    } else {  // PAULI_CHANNEL_1
                        double px = inst.params[0], py = inst.params[1], pz = inst.params[2];
                        if (u < px) {
                            comp = 1;
                        } else if (u < px + py) {
                            comp = 2;
                        } else if (u < px + py + pz) {
                            comp = 3;
                        }
                    }
                    if (comp == 1) {
                        sim.do_x(t.value);
                    } else if (comp == 2) {
                        sim.do_y(t.value);
                    } else if (comp == 3) {
                        sim.do_z(t.value);
                    }
                }
                break;
            case OpKind::noise2:
                for (size_t i = 0; i < inst.targets.size(); i += 2) {
                    double u = rng.next_unit();
                    double p = inst.params[0];
                    if (u < p) {
                        int comp = 1 + (int)(u / (p / 15.0));
                        comp = comp > 15 ? 15 : comp;
                        int pa = comp >> 2, pb = comp & 3;
                        uint32_t qa = inst.targets[i].value, qb = inst.targets[i + 1].value;
                        if (pa == 1) {
                            sim.do_x(qa);
                        } else if (pa == 2) {
                            sim.do_y(qa);
                        } else if (pa == 3) {
                            sim.do_z(qa);
                        }
                        if (pb == 1) {
                            sim.do_x(qb);
                        } else if (pb == 2) {
                            sim.do_y(qb);
                        } else if (pb == 3) {
                            sim.do_z(qb);
                        }
                    }
                }
                break;
            case OpKind::tick:
            case OpKind::detector:
            case OpKind::observable:
                break;
        }
    }

    ResolvedRecords rr = resolve_records(c);
    out.detectors.reserve(rr.detectors.size());
    for (const auto &refs : rr.detectors) {
        bool v = false;
        for (uint32_t r : refs) {
            v ^= out.records[r];
        }
        out.detectors.push_back(v);
    }
    for (const auto &refs : rr.observables) {
        bool v = false;
        for (uint32_t r : refs) {
            v ^= out.records[r];
        }
        out.observables.push_back(v);
    }
    return out;
}

}  // namespace qecforge
