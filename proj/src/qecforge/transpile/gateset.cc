#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "qecforge/transpile/transpile.h"

namespace qecforge {

const char *gateset_name(GateSetId g) {
    switch (g) {
        case GateSetId::stim_clifford: return "stim_clifford";
        case GateSetId::heron: return "heron";
        case GateSetId::h2: return "h2";
    }
    return "?";
}

GateSetId gateset_from_name(const std::string &name) {
    if (name == "stim_clifford" || name == "stim") return GateSetId::stim_clifford;
    if (name == "heron") return GateSetId::heron;
    if (name == "h2") return GateSetId::h2;
    throw std::invalid_argument("unknown gate set '" + name + "'");
}

namespace {

// Conjugation action of a single-qubit Clifford, tracked as the signed
// Pauli images of X, Y, Z (pauli index 0=X, 1=Y, 2=Z).
struct SPauli {
    uint8_t p = 0;
    bool neg = false;
};

struct Action1q {
    std::array<SPauli, 3> img;  // images of X, Y, Z

    SPauli apply(SPauli s) const {
        SPauli r = img[s.p];
        r.neg ^= s.neg;
        return r;
    }
    Action1q then(const Action1q &later) const {
        Action1q r;
        for (int p = 0; p < 3; p++) r.img[p] = later.apply(img[p]);
        return r;
    }
    bool identity() const {
        for (int p = 0; p < 3; p++) {
            if (img[p].p != p || img[p].neg) return false;
        }
        return true;
    }
    // X and Z images determine the element; 6-bit key.
    uint8_t key() const {
        return static_cast<uint8_t>(img[0].p | (img[0].neg << 2) | (img[2].p << 3) |
                                    (img[2].neg << 5));
    }
};

// Builds an action from the X and Z images; the Y image follows from
// Y = iXZ and the Pauli multiplication phases.
Action1q from_xz(SPauli ix, SPauli iz) {
    Action1q a;
    a.img[0] = ix;
    a.img[2] = iz;
    // Y = iXZ; sigma*tau = +i*rho when (sigma,tau) is a forward cycle
    // (X,Y),(Y,Z),(Z,X), so the Y image picks up a sign on forward cycles.
    bool cyclic = (ix.p + 1) % 3 == iz.p;
    uint8_t rho = static_cast<uint8_t>(3 - ix.p - iz.p);
    a.img[1] = SPauli{rho, static_cast<bool>(ix.neg ^ iz.neg ^ cyclic)};
    return a;
}

Action1q identity_action() {
    return from_xz({0, false}, {2, false});
}

// k: RZ parameter for Op::RZ, ignored otherwise.
Action1q action_of(Op op, int k) {
    switch (op) {
        case Op::X: return from_xz({0, false}, {2, true});
        case Op::Y: return from_xz({0, true}, {2, true});
        case Op::Z: return from_xz({0, true}, {2, false});
        case Op::H: return from_xz({2, false}, {0, false});
        case Op::S: return from_xz({1, false}, {2, false});
        case Op::S_DAG: return from_xz({1, true}, {2, false});
        case Op::SX: return from_xz({0, false}, {1, true});
        case Op::SX_DAG: return from_xz({0, false}, {1, false});
        case Op::RZ:
            switch (k & 3) {
                case 0: return identity_action();
                case 1: return action_of(Op::S, 0);
                case 2: return action_of(Op::Z, 0);
                default: return action_of(Op::S_DAG, 0);
            }
        default: throw std::invalid_argument("not a single-qubit gate");
    }
}

struct NativeGate {
    Op op;
    int k;  // RZ parameter when op == RZ
};

using Word = std::vector<NativeGate>;

std::vector<NativeGate> generators_for(GateSetId g) {
    switch (g) {
        case GateSetId::stim_clifford:
            return {{Op::X, 0},  {Op::Y, 0},      {Op::Z, 0},  {Op::H, 0},
                    {Op::S, 0},  {Op::S_DAG, 0},  {Op::SX, 0}, {Op::SX_DAG, 0}};
        case GateSetId::heron:
            return {{Op::X, 0}, {Op::SX, 0}, {Op::RZ, 1}, {Op::RZ, 2}, {Op::RZ, 3}};
        case GateSetId::h2:
            return {{Op::X, 0},  {Op::Y, 0},  {Op::SX, 0}, {Op::SX_DAG, 0},
                    {Op::RZ, 1}, {Op::RZ, 2}, {Op::RZ, 3}};
    }
    return {};
}

// Minimal native word for every reachable 1q Clifford, by breadth-first
// search over right-multiplication; 24 elements total.
const std::map<uint8_t, Word> &synth_table(GateSetId g) {
    static std::map<GateSetId, std::map<uint8_t, Word>> cache;
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;

    std::map<uint8_t, Word> table;
    std::map<uint8_t, Action1q> actions;
    Action1q id = identity_action();
    table[id.key()] = {};
    actions[id.key()] = id;
    std::queue<uint8_t> frontier;
    frontier.push(id.key());
    auto gens = generators_for(g);
    while (!frontier.empty()) {
        uint8_t cur = frontier.front();
        frontier.pop();
        for (const auto &gate : gens) {
            Action1q next = actions[cur].then(action_of(gate.op, gate.k));
            if (table.count(next.key())) continue;
            Word w = table[cur];
            w.push_back(gate);
            table[next.key()] = std::move(w);
            actions[next.key()] = next;
            frontier.push(next.key());
        }
    }
    if (table.size() != 24) {
        throw std::logic_error("gate set does not generate the 1q Clifford group");
    }
    return cache.emplace(g, std::move(table)).first->second;
}

bool native_1q(GateSetId g, Op op) {
    switch (g) {
        case GateSetId::stim_clifford: return true;
        case GateSetId::heron: return op == Op::X || op == Op::SX || op == Op::RZ;
        case GateSetId::h2:
            return op == Op::X || op == Op::Y || op == Op::SX || op == Op::SX_DAG ||
                   op == Op::RZ;
    }
    return false;
}

void emit_word(std::vector<Instruction> &out, const Word &w, uint32_t q) {
    for (const auto &gate : w) {
        Instruction inst;
        inst.op = gate.op;
        inst.targets = {Target::qubit(q)};
        if (gate.op == Op::RZ) inst.params = {static_cast<double>(gate.k)};
        out.push_back(std::move(inst));
    }
}

void emit_1q(std::vector<Instruction> &out, GateSetId g, Op op, int k, uint32_t q) {
    if (op == Op::RZ && (k & 3) == 0) return;
    if (native_1q(g, op)) {
        Instruction inst;
        inst.op = op;
        inst.targets = {Target::qubit(q)};
        if (op == Op::RZ) inst.params = {static_cast<double>(k & 3)};
        out.push_back(std::move(inst));
        return;
    }
    emit_word(out, synth_table(g).at(action_of(op, k).key()), q);
}

void emit_2q(std::vector<Instruction> &out, GateSetId g, Op op, uint32_t a, uint32_t b);

void emit_cx(std::vector<Instruction> &out, GateSetId g, uint32_t a, uint32_t b) {
    switch (g) {
        case GateSetId::stim_clifford:
            out.push_back({Op::CX, {}, {Target::qubit(a), Target::qubit(b)}});
            return;
        case GateSetId::heron:
            emit_1q(out, g, Op::H, 0, b);
            out.push_back({Op::CZ, {}, {Target::qubit(a), Target::qubit(b)}});
            emit_1q(out, g, Op::H, 0, b);
            return;
        case GateSetId::h2:
            emit_1q(out, g, Op::H, 0, b);
            emit_2q(out, g, Op::CZ, a, b);
            emit_1q(out, g, Op::H, 0, b);
            return;
    }
}

void emit_2q(std::vector<Instruction> &out, GateSetId g, Op op, uint32_t a, uint32_t b) {
    auto pair = [&](Op o) {
        out.push_back({o, {}, {Target::qubit(a), Target::qubit(b)}});
    };
    if (g == GateSetId::stim_clifford) {
        pair(op);
        return;
    }
    switch (op) {
        case Op::SWAP:
            // Three CXs first, then each CX is rewritten for the entangler.
            emit_cx(out, g, a, b);
            emit_cx(out, g, b, a);
            emit_cx(out, g, a, b);
            return;
        case Op::CX:
            emit_cx(out, g, a, b);
            return;
        case Op::CZ:
            if (g == GateSetId::heron) {
                pair(Op::CZ);
            } else {
                // CZ = RZZ followed by S_DAG on both halves (diagonals commute).
                pair(Op::RZZ);
                emit_1q(out, g, Op::S_DAG, 0, a);
                emit_1q(out, g, Op::S_DAG, 0, b);
            }
            return;
        case Op::RZZ:
            if (g == GateSetId::h2) {
                pair(Op::RZZ);
            } else {
                // RZZ = CZ followed by S on both halves.
                pair(Op::CZ);
                emit_1q(out, g, Op::S, 0, a);
                emit_1q(out, g, Op::S, 0, b);
            }
            return;
        default: throw std::invalid_argument("unknown two-qubit gate");
    }
}

// True when `inst` takes qubit targets (so a pending 1q word on one of its
// qubits has to be flushed before it).
bool touches_qubits(const Instruction &inst) {
    OpKind k = op_info(inst.op).kind;
    return k != OpKind::detector && k != OpKind::observable && k != OpKind::tick;
}

// Collapses runs of adjacent 1q gates per qubit into minimal native words.
bool collapse_1q_runs(std::vector<Instruction> &work, GateSetId g) {
    std::vector<Instruction> out;
    std::map<uint32_t, Action1q> pending;
    auto flush = [&](uint32_t q) {
        auto it = pending.find(q);
        if (it == pending.end()) return;
        if (!it->second.identity()) {
            emit_word(out, synth_table(g).at(it->second.key()), q);
        }
        pending.erase(it);
    };
    auto flush_all = [&]() {
        while (!pending.empty()) flush(pending.begin()->first);
    };
    for (const auto &inst : work) {
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::gate1) {
            int rz = inst.params.empty() ? 0 : static_cast<int>(inst.params[0]);
            for (const auto &t : inst.targets) {
                auto it = pending.emplace(t.value, identity_action()).first;
                it->second = it->second.then(action_of(inst.op, rz));
            }
            continue;
        }
        if (k == OpKind::tick) {
            flush_all();
        } else if (touches_qubits(inst)) {
            for (const auto &t : inst.targets) flush(t.value);
        }
        out.push_back(inst);
    }
    flush_all();
    bool changed = out.size() != work.size() || !(out == work);
    work = std::move(out);
    return changed;
}

// Removes adjacent self-inverse two-qubit pairs (CX/CZ/SWAP on the same
// qubits with nothing touching them in between; TICKs act as barriers) and
// rewrites doubled RZZ into Z pairs.
bool cancel_2q_pairs(std::vector<Instruction> &work) {
    bool changed = false;
    std::vector<char> dead(work.size(), 0);
    for (size_t i = 0; i < work.size(); i++) {
        if (dead[i]) continue;
        const Instruction &a = work[i];
        if (op_info(a.op).kind != OpKind::gate2) continue;
        uint32_t qa = a.targets[0].value, qb = a.targets[1].value;
        for (size_t j = i + 1; j < work.size(); j++) {
            if (dead[j]) continue;
            const Instruction &b = work[j];
            if (op_info(b.op).kind == OpKind::tick) break;
            if (!touches_qubits(b)) continue;
            bool touches = false;
            for (const auto &t : b.targets) touches |= t.value == qa || t.value == qb;
            if (!touches) continue;
            bool same_pair =
                b.op == a.op && b.targets.size() == 2 &&
                ((b.targets[0].value == qa && b.targets[1].value == qb) ||
                 (a.op != Op::CX && b.targets[0].value == qb && b.targets[1].value == qa));
            if (same_pair && b.targets[0].value != b.targets[1].value &&
                (a.op == Op::CX || a.op == Op::CZ || a.op == Op::SWAP || a.op == Op::RZZ)) {
                // Both halves of b must see nothing in between; the scan
                // breaks at the first instruction touching either qubit, so
                // reaching here means the pair is adjacent.
                dead[i] = dead[j] = 1;
                if (a.op == Op::RZZ) {
                    // RZZ twice is Z on both qubits, not identity.
                    work[j] = {Op::Z, {}, {Target::qubit(qa)}};
                    dead[j] = 0;
                    work.insert(work.begin() + j + 1, {Op::Z, {}, {Target::qubit(qb)}});
                    dead.insert(dead.begin() + j + 1, 0);
                }
                changed = true;
            }
            break;
        }
    }
    std::vector<Instruction> out;
    for (size_t i = 0; i < work.size(); i++) {
        if (!dead[i]) out.push_back(std::move(work[i]));
    }
    work = std::move(out);
    return changed;
}

}  // namespace

Circuit translate(const Circuit &c, GateSetId g, bool optimize) {
    std::vector<Instruction> work;
    for (const auto &inst : c.instructions) {
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::gate2) {
            for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                emit_2q(work, g, inst.op, inst.targets[i].value, inst.targets[i + 1].value);
            }
        } else if (k == OpKind::gate1) {
            int rz = inst.params.empty() ? 0 : static_cast<int>(inst.params[0]);
            for (const auto &t : inst.targets) {
                emit_1q(work, g, inst.op, rz, t.value);
            }
        } else {
            work.push_back(inst);
        }
    }
    if (optimize) {
        for (int pass = 0; pass < 4; pass++) {
            bool a = cancel_2q_pairs(work);
            bool b = collapse_1q_runs(work, g);
            if (!a && !b) break;
        }
    }
    Circuit out;
    for (const auto &inst : work) out.append(inst);
    return out;
}

}  // namespace qecforge
