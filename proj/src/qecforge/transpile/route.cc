#include <algorithm>
#include <cstring>
#include <limits>
#include <queue>
#include <stdexcept>

#include "qecforge/transpile/transpile.h"
#include "qecforge/util/rng.h"

namespace qecforge {

const char *routing_strategy_name(RoutingStrategy s) {
    switch (s) {
        case RoutingStrategy::basic: return "basic";
        case RoutingStrategy::stochastic: return "stochastic";
        case RoutingStrategy::sabre: return "sabre";
    }
    return "?";
}

RoutingStrategy routing_strategy_from_name(const std::string &name) {
    if (name == "basic") return RoutingStrategy::basic;
    if (name == "stochastic") return RoutingStrategy::stochastic;
    if (name == "sabre") return RoutingStrategy::sabre;
    throw std::invalid_argument("unknown routing strategy '" + name + "'");
}

namespace {

constexpr uint16_t kUnreachable = std::numeric_limits<uint16_t>::max();
constexpr uint32_t kStochasticTrials = 32;
constexpr size_t kStochasticLookahead = 8;
constexpr size_t kSabreWindow = 20;
constexpr double kSabreDecayStep = 0.001;
constexpr uint32_t kSabreDecayReset = 5;

std::vector<uint16_t> all_pairs_distance(const Device &d,
                                         const std::vector<std::vector<uint32_t>> &adj) {
    size_t n = d.num_qubits();
    std::vector<uint16_t> dist(n * n, kUnreachable);
    if (d.edges.size() == n * (n - 1) / 2) {
        // Complete graph (plain or shuttle-augmented): distance 1 everywhere.
        for (size_t a = 0; a < n; a++) {
            for (size_t b = 0; b < n; b++) dist[a * n + b] = a == b ? 0 : 1;
        }
        return dist;
    }
    std::vector<uint32_t> frontier;
    for (size_t s = 0; s < n; s++) {
        uint16_t *row = dist.data() + s * n;
        row[s] = 0;
        frontier.assign(1, static_cast<uint32_t>(s));
        std::vector<uint32_t> next;
        uint16_t depth = 0;
        while (!frontier.empty()) {
            depth++;
            next.clear();
            for (uint32_t q : frontier) {
                for (uint32_t nb : adj[q]) {
                    if (row[nb] == kUnreachable) {
                        row[nb] = depth;
                        next.push_back(nb);
                    }
                }
            }
            frontier.swap(next);
        }
    }
    return dist;
}

struct Router {
    const Device &dev;
    RoutingStrategy strategy;
    uint64_t seed;
    size_t n;
    std::vector<std::vector<uint32_t>> adj;
    std::vector<uint16_t> dist;
    std::vector<uint32_t> l2p, p2l;
    Circuit out;
    TrackerLog log;
    uint32_t swaps = 0;
    std::vector<std::pair<uint32_t, uint32_t>> future;  // logical 2q pairs in order
    size_t future_pos = 0;
    std::vector<double> decay;
    uint32_t decay_counter = 0;
    uint32_t blocked_counter = 0;

    Router(const Device &d, RoutingStrategy s, uint64_t sd)
        : dev(d), strategy(s), seed(sd), n(d.num_qubits()), adj(d.adjacency(true)),
          dist(all_pairs_distance(d, adj)), decay(n, 1.0) {}

    uint16_t d_at(uint32_t a, uint32_t b) const {
        return dist[static_cast<size_t>(a) * n + b];
    }

    void do_swap(uint32_t pa, uint32_t pb) {
        out.append(Op::SWAP, {Target::qubit(pa), Target::qubit(pb)});
        swaps++;
        uint32_t la = p2l[pa], lb = p2l[pb];
        std::swap(p2l[pa], p2l[pb]);
        if (la != UINT32_MAX) l2p[la] = pb;
        if (lb != UINT32_MAX) l2p[lb] = pa;
        log.swaps.push_back({out.instructions.size() - 1, pa, pb});
        log.snapshots.push_back(l2p);
    }

    void make_adjacent(uint32_t la, uint32_t lb) {
        if (d_at(l2p[la], l2p[lb]) > 1) blocked_counter++;
        switch (strategy) {
            case RoutingStrategy::basic: basic_walk(la, lb); break;
            case RoutingStrategy::stochastic: stochastic_walk(la, lb); break;
            case RoutingStrategy::sabre: sabre_walk(la, lb); break;
        }
    }

    void basic_walk(uint32_t la, uint32_t lb) {
        while (d_at(l2p[la], l2p[lb]) > 1) {
            uint32_t pa = l2p[la], pb = l2p[lb];
            uint32_t best = UINT32_MAX;
            uint16_t best_d = kUnreachable;
            for (uint32_t nb : adj[pa]) {
                uint16_t dd = d_at(nb, pb);
                if (dd < best_d || (dd == best_d && nb < best)) {
                    best_d = dd;
                    best = nb;
                }
            }
            if (best == UINT32_MAX) throw std::invalid_argument("device is disconnected");
            do_swap(pa, best);
        }
    }

    double lookahead_cost(const std::vector<uint32_t> &map, size_t from, size_t count) const {
        double cost = 0;
        size_t end = std::min(future.size(), from + count);
        for (size_t i = from; i < end; i++) {
            cost += d_at(map[future[i].first], map[future[i].second]);
        }
        return cost;
    }

    void stochastic_walk(uint32_t la, uint32_t lb) {
        if (d_at(l2p[la], l2p[lb]) <= 1) return;
        std::vector<std::pair<uint32_t, uint32_t>> best_swaps;
        double best_score = std::numeric_limits<double>::infinity();
        for (uint32_t trial = 0; trial < kStochasticTrials; trial++) {
            std::vector<uint32_t> tl2p = l2p, tp2l = p2l;
            std::vector<std::pair<uint32_t, uint32_t>> trial_swaps;
            uint32_t step = 0;
            while (d_at(tl2p[la], tl2p[lb]) > 1) {
                uint64_t word = keyed_u64(seed, 0x570C4000u + blocked_counter,
                                          (static_cast<uint64_t>(trial) << 16) | step);
                uint32_t pa = tl2p[la], pb = tl2p[lb];
                bool move_a = word & 1;
                uint32_t from = move_a ? pa : pb;
                uint32_t toward = move_a ? pb : pa;
                uint16_t dd = d_at(from, toward);
                std::vector<uint32_t> descend;
                for (uint32_t nb : adj[from]) {
                    if (d_at(nb, toward) < dd) descend.push_back(nb);
                }
                uint32_t pick = descend[(word >> 1) % descend.size()];
                trial_swaps.push_back({from, pick});
                uint32_t lfrom = tp2l[from], lpick = tp2l[pick];
                std::swap(tp2l[from], tp2l[pick]);
                if (lfrom != UINT32_MAX) tl2p[lfrom] = pick;
                if (lpick != UINT32_MAX) tl2p[lpick] = from;
                step++;
            }
            double score = static_cast<double>(trial_swaps.size()) +
                           0.1 * lookahead_cost(tl2p, future_pos + 1, kStochasticLookahead);
            if (score < best_score) {
                best_score = score;
                best_swaps = std::move(trial_swaps);
            }
        }
        for (const auto &[a, b] : best_swaps) do_swap(a, b);
    }

    void sabre_walk(uint32_t la, uint32_t lb) {
        uint32_t budget = 0;
        while (d_at(l2p[la], l2p[lb]) > 1) {
            if (++budget > 4 * n + 16) {
                // Heuristic stall: finish with plain descent.
                basic_walk(la, lb);
                return;
            }
            uint32_t pa = l2p[la], pb = l2p[lb];
            double best_score = std::numeric_limits<double>::infinity();
            uint32_t bu = UINT32_MAX, bv = UINT32_MAX;
            for (uint32_t u : {pa, pb}) {
                for (uint32_t v : adj[u]) {
                    auto moved = [&](uint32_t p) { return p == u ? v : (p == v ? u : p); };
                    double front = d_at(moved(pa), moved(pb));
                    double ext = 0;
                    size_t end = std::min(future.size(), future_pos + 1 + kSabreWindow);
                    size_t cnt = end - std::min(end, future_pos + 1);
                    for (size_t i = future_pos + 1; i < end; i++) {
                        ext += d_at(moved(l2p[future[i].first]), moved(l2p[future[i].second]));
                    }
                    double score = std::max(decay[u], decay[v]) *
                                   (front + (cnt ? 0.5 * ext / cnt : 0.0));
                    if (score < best_score - 1e-12 ||
                        (score < best_score + 1e-12 &&
                         (u < bu || (u == bu && v < bv)))) {
                        best_score = score;
                        bu = u;
                        bv = v;
                    }
                }
            }
            do_swap(bu, bv);
            decay[bu] += kSabreDecayStep;
            decay[bv] += kSabreDecayStep;
            if (++decay_counter % kSabreDecayReset == 0) {
                std::fill(decay.begin(), decay.end(), 1.0);
            }
        }
    }
};

}  // namespace

Circuit route_circuit(const Circuit &c, const Device &d, const LayoutMap &l,
                      RoutingStrategy strategy, uint64_t seed, TrackerLog *tracker_out,
                      SwapMetrics *metrics_out) {
    d.validate();
    if (!d.is_connected()) throw std::invalid_argument("device is disconnected");
    if (l.logical_to_physical.size() < c.num_qubits) {
        throw std::invalid_argument("layout does not cover the circuit");
    }
    Router r(d, strategy, seed);
    r.l2p.assign(l.logical_to_physical.begin(), l.logical_to_physical.end());
    r.p2l.assign(r.n, UINT32_MAX);
    for (size_t q = 0; q < r.l2p.size(); q++) {
        if (r.l2p[q] >= r.n) throw std::invalid_argument("layout maps beyond the device");
        if (r.p2l[r.l2p[q]] != UINT32_MAX) throw std::invalid_argument("layout is not injective");
        r.p2l[r.l2p[q]] = static_cast<uint32_t>(q);
    }
    r.log.initial_mapping = r.l2p;

    for (const auto &inst : c.instructions) {
        if (op_info(inst.op).kind != OpKind::gate2) continue;
        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
            r.future.push_back({inst.targets[i].value, inst.targets[i + 1].value});
        }
    }

    for (const auto &inst : c.instructions) {
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::tick || k == OpKind::detector || k == OpKind::observable) {
            r.out.append(inst);
            continue;
        }
        if (k == OpKind::gate2 || k == OpKind::noise2) {
            for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
                uint32_t la = inst.targets[i].value, lb = inst.targets[i + 1].value;
                if (k == OpKind::gate2) {
                    r.make_adjacent(la, lb);
                    r.future_pos++;
                }
                r.out.append(inst.op, {Target::qubit(r.l2p[la]), Target::qubit(r.l2p[lb])},
                             inst.params);
            }
            continue;
        }
        std::vector<Target> remapped;
        remapped.reserve(inst.targets.size());
        for (const auto &t : inst.targets) remapped.push_back(Target::qubit(r.l2p[t.value]));
        r.out.append(inst.op, std::move(remapped), inst.params);
    }
    r.log.final_mapping = r.l2p;

    if (tracker_out) *tracker_out = std::move(r.log);
    if (metrics_out) {
        SwapMetrics m;
        m.swaps_inserted = r.swaps;
        m.extra_2q = 3 * r.swaps;
        uint32_t orig2q = count_2q_gates(c);
        m.pct_of_original_2q = orig2q ? 100.0 * m.extra_2q / orig2q : 0.0;
        uint32_t before = count_ops(c), after = count_ops(r.out);
        m.gates_added_per_original =
            before ? static_cast<double>(after - before) / before : 0.0;
        *metrics_out = m;
    }
    return std::move(r.out);
}

RouteResult route(const Circuit &c, const Device &d, const LayoutMap &l, RoutingStrategy strategy,
                  uint64_t seed) {
    RouteResult res;
    res.circuit = route_circuit(c, d, l, strategy, seed, &res.tracker, &res.metrics);
    return res;
}

bool gates_on_device(const Circuit &c, const Device &d) {
    size_t n = d.num_qubits();
    std::vector<char> adjacent(n * n, 0);
    for (const auto &e : d.edges) {
        adjacent[static_cast<size_t>(e.a) * n + e.b] = 1;
        adjacent[static_cast<size_t>(e.b) * n + e.a] = 1;
    }
    for (const auto &inst : c.instructions) {
        if (op_info(inst.op).kind != OpKind::gate2) continue;
        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
            uint32_t a = inst.targets[i].value, b = inst.targets[i + 1].value;
            if (a >= n || b >= n || !adjacent[static_cast<size_t>(a) * n + b]) return false;
        }
    }
    return true;
}

bool tracker_consistent(const TrackerLog &t) {
    if (t.snapshots.size() != t.swaps.size()) return false;
    std::vector<uint32_t> cur = t.initial_mapping;
    for (size_t k = 0; k < t.swaps.size(); k++) {
        for (auto &p : cur) {
            if (p == t.swaps[k].phys_a) {
                p = t.swaps[k].phys_b;
            } else if (p == t.swaps[k].phys_b) {
                p = t.swaps[k].phys_a;
            }
        }
        if (cur != t.snapshots[k]) return false;
    }
    return cur == t.final_mapping;
}

SwapMetrics overhead_metrics(const Circuit &before, const Circuit &after) {
    SwapMetrics m;
    uint32_t sb = count_swaps(before), sa = count_swaps(after);
    m.swaps_inserted = sa > sb ? sa - sb : 0;
    m.extra_2q = 3 * m.swaps_inserted;
    uint32_t orig2q = count_2q_gates(before);
    m.pct_of_original_2q = orig2q ? 100.0 * m.extra_2q / orig2q : 0.0;
    uint32_t ob = count_ops(before), oa = count_ops(after);
    m.gates_added_per_original = ob ? static_cast<double>(oa) / ob - 1.0 : 0.0;
    return m;
}

}  // namespace qecforge
