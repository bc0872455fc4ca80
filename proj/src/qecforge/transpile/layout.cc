#include <algorithm>
#include <limits>
#include <stdexcept>

#include "qecforge/transpile/transpile.h"
#include "qecforge/util/rng.h"

namespace qecforge {

const char *layout_strategy_name(LayoutStrategy s) {
    switch (s) {
        case LayoutStrategy::trivial: return "trivial";
        case LayoutStrategy::dense: return "dense";
        case LayoutStrategy::sabre: return "sabre";
    }
    return "?";
}

LayoutStrategy layout_strategy_from_name(const std::string &name) {
    if (name == "trivial") return LayoutStrategy::trivial;
    if (name == "dense") return LayoutStrategy::dense;
    if (name == "sabre") return LayoutStrategy::sabre;
    throw std::invalid_argument("unknown layout strategy '" + name + "'");
}

namespace {

// Greedy block growth from every start vertex; keeps the qubit set with the
// most internal edges. Ties break toward smaller qubit ids throughout.
std::vector<uint32_t> dense_block(const Device &d, uint32_t n) {
    auto adj = d.adjacency(true);
    size_t np = d.num_qubits();
    std::vector<uint32_t> best;
    int64_t best_score = -1;
    std::vector<char> in_set(np);
    for (uint32_t start = 0; start < np; start++) {
        std::fill(in_set.begin(), in_set.end(), 0);
        std::vector<uint32_t> set{start};
        in_set[start] = 1;
        int64_t internal = 0;
        while (set.size() < n) {
            uint32_t pick = UINT32_MAX;
            int64_t pick_gain = -1;
            size_t pick_degree = 0;
            for (uint32_t member : set) {
                for (uint32_t cand : adj[member]) {
                    if (in_set[cand]) continue;
                    int64_t gain = 0;
                    for (uint32_t nb : adj[cand]) gain += in_set[nb];
                    if (gain > pick_gain ||
                        (gain == pick_gain && adj[cand].size() > pick_degree) ||
                        (gain == pick_gain && adj[cand].size() == pick_degree && cand < pick)) {
                        pick = cand;
                        pick_gain = gain;
                        pick_degree = adj[cand].size();
                    }
                }
            }
            if (pick == UINT32_MAX) break;  // component exhausted
            set.push_back(pick);
            in_set[pick] = 1;
            internal += pick_gain;
        }
        if (set.size() == n && internal > best_score) {
            best_score = internal;
            std::sort(set.begin(), set.end());
            best = std::move(set);
        }
    }
    if (best.empty()) {
        throw std::invalid_argument("no connected block of the requested size");
    }
    return best;
}

// Interaction skeleton: just the two-qubit structure, which is all layout
// quality depends on.
Circuit skeleton_of(const Circuit &c, bool reversed) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (const auto &inst : c.instructions) {
        if (op_info(inst.op).kind != OpKind::gate2) continue;
        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
            pairs.push_back({inst.targets[i].value, inst.targets[i + 1].value});
        }
    }
    if (reversed) std::reverse(pairs.begin(), pairs.end());
    Circuit out;
    for (const auto &[a, b] : pairs) out.append(Op::CX, {Target::qubit(a), Target::qubit(b)});
    out.num_qubits = std::max(out.num_qubits, c.num_qubits);
    return out;
}

std::vector<uint32_t> sabre_initial(uint32_t n, size_t np, uint64_t seed) {
    std::vector<uint32_t> phys(np);
    for (size_t i = 0; i < np; i++) phys[i] = static_cast<uint32_t>(i);
    for (size_t i = np - 1; i > 0; i--) {
        size_t j = keyed_u64(seed, 0x1A407u, i) % (i + 1);
        std::swap(phys[i], phys[j]);
    }
    phys.resize(n);
    return phys;
}

std::vector<uint32_t> sabre_refine(const Circuit &c, const Device &d, uint64_t seed) {
    uint32_t n = c.num_qubits;
    Circuit fwd = skeleton_of(c, false);
    Circuit bwd = skeleton_of(c, true);
    std::vector<uint32_t> mapping = sabre_initial(n, d.num_qubits(), seed);
    std::vector<uint32_t> best = mapping;
    uint32_t best_swaps = std::numeric_limits<uint32_t>::max();
    for (int iter = 0; iter < 3; iter++) {
        LayoutMap l{LayoutStrategy::sabre, mapping};
        RouteResult f = route(fwd, d, l, RoutingStrategy::sabre, seed + iter);
        if (f.metrics.swaps_inserted < best_swaps) {
            best_swaps = f.metrics.swaps_inserted;
            best = mapping;
        }
        LayoutMap back{LayoutStrategy::sabre, f.tracker.final_mapping};
        RouteResult b = route(bwd, d, back, RoutingStrategy::sabre, seed + iter);
        mapping = b.tracker.final_mapping;
    }
    LayoutMap l{LayoutStrategy::sabre, mapping};
    RouteResult last = route(fwd, d, l, RoutingStrategy::sabre, seed + 3);
    if (last.metrics.swaps_inserted < best_swaps) best = mapping;
    return best;
}

}  // namespace

LayoutMap layout(const Circuit &c, const Device &d, LayoutStrategy strategy, uint64_t seed) {
    uint32_t n = c.num_qubits;
    if (n > d.num_qubits()) {
        throw std::invalid_argument("circuit needs more qubits than the device has");
    }
    LayoutMap l;
    l.strategy = strategy;
    switch (strategy) {
        case LayoutStrategy::trivial:
            l.logical_to_physical.resize(n);
            for (uint32_t q = 0; q < n; q++) l.logical_to_physical[q] = q;
            break;
        case LayoutStrategy::dense:
            l.logical_to_physical = dense_block(d, n);
            break;
        case LayoutStrategy::sabre:
            l.logical_to_physical = sabre_refine(c, d, seed);
            break;
    }
    return l;
}

}  // namespace qecforge
