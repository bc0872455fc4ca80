#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <thread>

#include "qecforge/decode/decode.h"
#include "qecforge/util/rng.h"

namespace qecforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr uint32_t kDpLimit = 16;  // exact matching up to this many defects

struct Adj {
    uint32_t to;
    double w;
    uint64_t obs;
};

}  // namespace

double mechanism_weight(double p) {
    p = std::min(std::max(p, 1e-14), 1.0 - 1e-14);
    return std::log((1.0 - p) / p);
}

MatchingGraph MatchingGraph::from_dem(const Dem &dem) {
    MatchingGraph g;
    g.num_detectors = dem.num_detectors;
    g.num_observables = dem.num_observables;
    for (const auto &mech : dem.mechanisms) {
        auto dets = mech.detectors();
        if (dets.size() > 2) {
            throw std::invalid_argument(
                "matching needs at most two detectors per mechanism; this model has a "
                "mechanism touching " +
                std::to_string(dets.size()) + " (use a check-matrix decoder instead)");
        }
        uint64_t obs = 0;
        for (uint32_t o : mech.observables()) {
            if (o >= 64) throw std::invalid_argument("more than 64 observables");
            obs |= 1ULL << o;
        }
        if (dets.empty()) continue;  // invisible to matching
        Edge e;
        e.a = dets[0];
        e.b = dets.size() == 2 ? dets[1] : kBoundary;
        e.weight = mechanism_weight(mech.p);
        e.obs = obs;
        g.edges.push_back(e);
    }

    // Dijkstra from every node over detectors plus one boundary node.
    uint32_t n = g.num_detectors + 1;
    uint32_t bnd = g.num_detectors;
    std::vector<std::vector<Adj>> adj(n);
    for (const auto &e : g.edges) {
        uint32_t b = e.b == kBoundary ? bnd : e.b;
        adj[e.a].push_back({b, e.weight, e.obs});
        adj[b].push_back({e.a, e.weight, e.obs});
    }
    g.dist.assign(n, std::vector<double>(n, kInf));
    g.path_obs.assign(n, std::vector<uint64_t>(n, 0));
    using Item = std::pair<double, uint32_t>;
    for (uint32_t src = 0; src < n; src++) {
        auto &d = g.dist[src];
        auto &m = g.path_obs[src];
        d[src] = 0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (const auto &a : adj[u]) {
                double nd = du + a.w;
                if (nd < d[a.to]) {
                    d[a.to] = nd;
                    m[a.to] = m[u] ^ a.obs;
                    pq.push({nd, a.to});
                }
            }
        }
    }
    return g;
}

namespace {

struct Pairing {
    // partner[i] = index of the defect matched to defect i, or -1 for boundary
    std::vector<int> partner;
    double weight = 0;
    bool ok = true;
};

Pairing match_exact(const MatchingGraph &g, const std::vector<uint32_t> &defects) {
    uint32_t k = defects.size();
    uint32_t bnd = g.num_detectors;
    size_t full = size_t(1) << k;
    std::vector<double> f(full, kInf);
    std::vector<int32_t> choice(full, -2);  // -1 = boundary, else paired index
    f[0] = 0;
    for (size_t s = 1; s < full; s++) {
        uint32_t i = std::countr_zero(s);
        size_t rest = s & (s - 1);
        double best = f[rest] + g.dist[defects[i]][bnd];
        int32_t pick = -1;
        for (size_t t = rest; t; t &= t - 1) {
            uint32_t j = std::countr_zero(t);
            size_t sub = rest & ~(size_t(1) << j);
            double cand = f[sub] + g.dist[defects[i]][defects[j]];
            if (cand < best) {
                best = cand;
                pick = static_cast<int32_t>(j);
            }
        }
        f[s] = best;
        choice[s] = pick;
    }
    Pairing out;
    out.partner.assign(k, -1);
    out.weight = f[full - 1];
    if (out.weight == kInf) {
        out.ok = false;
        return out;
    }
    size_t s = full - 1;
    while (s) {
        uint32_t i = std::countr_zero(s);
        int32_t j = choice[s];
        if (j < 0) {
            out.partner[i] = -1;
            s &= s - 1;
        } else {
            out.partner[i] = j;
            out.partner[j] = static_cast<int>(i);
            s &= ~(size_t(1) << i);
            s &= ~(size_t(1) << static_cast<uint32_t>(j));
        }
    }
    return out;
}

// Greedy closest-pair construction plus pair-swap polishing for defect
// sets too large for the exact sweep.
Pairing match_greedy(const MatchingGraph &g, const std::vector<uint32_t> &defects) {
    uint32_t k = defects.size();
    uint32_t bnd = g.num_detectors;
    auto d = [&](int i, int j) {
        if (i < 0 || j < 0) throw std::logic_error("bad defect index");
        return g.dist[defects[i]][defects[j]];
    };
    auto bd = [&](int i) { return g.dist[defects[i]][bnd]; };

    Pairing out;
    out.partner.assign(k, -2);
    std::vector<uint8_t> done(k, 0);
    struct Cand {
        double w;
        int i, j;  // j == -1 means boundary
    };
    std::vector<Cand> cands;
    for (uint32_t i = 0; i < k; i++) {
        cands.push_back({bd(i), static_cast<int>(i), -1});
        for (uint32_t j = i + 1; j < k; j++) {
            cands.push_back({d(i, j), static_cast<int>(i), static_cast<int>(j)});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand &a, const Cand &b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    for (const auto &c : cands) {
        if (done[c.i] || (c.j >= 0 && done[c.j])) continue;
        if (c.w == kInf) break;
        done[c.i] = 1;
        out.partner[c.i] = c.j;
        if (c.j >= 0) {
            done[c.j] = 1;
            out.partner[c.j] = c.i;
        }
    }
    for (uint32_t i = 0; i < k; i++) {
        if (!done[i]) {
            out.ok = false;
            return out;
        }
    }

    // 2-opt: try rewiring every pair of matched units while it helps.
    auto unit_cost = [&](int i) { return out.partner[i] < 0 ? bd(i) : d(i, out.partner[i]); };
    for (int pass = 0; pass < 24; pass++) {
        bool improved = false;
        for (uint32_t a = 0; a < k; a++) {
            int pa = out.partner[a];
            if (pa >= 0 && static_cast<uint32_t>(pa) < a) continue;
            for (uint32_t b = a + 1; b < k; b++) {
                int pb = out.partner[b];
                if (static_cast<int>(b) == pa) continue;
                if (pb >= 0 && static_cast<uint32_t>(pb) < b) continue;
                double cur = unit_cost(a) + unit_cost(b);
                // option 1: a-b together, old partners to boundary
                double alt1 = d(a, b) + (pa >= 0 ? bd(pa) : 0) + (pb >= 0 ? bd(pb) : 0);
                // option 2: swap partners (only when both have one)
                double alt2 = kInf;
                if (pa >= 0 && pb >= 0) alt2 = d(a, pb) + d(b, pa);
                if (alt1 < cur - 1e-12 && alt1 <= alt2) {
                    if (pa >= 0) out.partner[pa] = -1;
                    if (pb >= 0) out.partner[pb] = -1;
                    out.partner[a] = static_cast<int>(b);
                    out.partner[b] = static_cast<int>(a);
                    improved = true;
                } else if (alt2 < cur - 1e-12) {
                    out.partner[a] = pb;
                    out.partner[pb] = static_cast<int>(a);
                    out.partner[b] = pa;
                    out.partner[pa] = static_cast<int>(b);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    out.weight = 0;
    for (uint32_t i = 0; i < k; i++) {
        if (out.partner[i] < 0) {
            out.weight += bd(i);
        } else if (static_cast<uint32_t>(out.partner[i]) > i) {
            out.weight += d(i, out.partner[i]);
        }
    }
    return out;
}

}  // namespace

MwpmResult mwpm_decode(const MatchingGraph &g, const std::vector<uint8_t> &events) {
    if (events.size() != g.num_detectors) {
        throw std::invalid_argument("event vector length does not match detector count");
    }
    std::vector<uint32_t> defects;
    for (uint32_t i = 0; i < g.num_detectors; i++) {
        if (events[i]) defects.push_back(i);
    }
    MwpmResult r;
    if (defects.empty()) return r;
    Pairing p = defects.size() <= kDpLimit ? match_exact(g, defects) : match_greedy(g, defects);
    if (!p.ok) {
        r.matched = false;
        r.weight = kInf;
        return r;
    }
    r.weight = p.weight;
    uint32_t bnd = g.num_detectors;
    for (uint32_t i = 0; i < defects.size(); i++) {
        if (p.partner[i] < 0) {
            r.obs ^= g.path_obs[defects[i]][bnd];
        } else if (static_cast<uint32_t>(p.partner[i]) > i) {
            r.obs ^= g.path_obs[defects[i]][defects[p.partner[i]]];
        }
    }
    return r;
}

ShotTable mwpm_decode_batch(const MatchingGraph &g, const ShotTable &dets, int threads) {
    if (dets.bits_per_shot != g.num_detectors) {
        throw std::invalid_argument("shot table width does not match detector count");
    }
    ShotTable preds(dets.shots, g.num_observables);
    size_t nthreads = threads > 0 ? threads : std::thread::hardware_concurrency();
    nthreads = std::max<size_t>(1, std::min(nthreads, dets.shots ? dets.shots : 1));
    auto worker = [&](size_t t) {
        std::vector<uint8_t> events(g.num_detectors);
        for (size_t shot = t; shot < dets.shots; shot += nthreads) {
            for (uint32_t i = 0; i < g.num_detectors; i++) events[i] = dets.get(shot, i);
            MwpmResult r = mwpm_decode(g, events);
            for (uint32_t o = 0; o < g.num_observables; o++) {
                if ((r.obs >> o) & 1) preds.flip(shot, o);
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nthreads; t++) pool.emplace_back(worker, t);
        for (auto &th : pool) th.join();
    }
    return preds;
}

Dem random_graphlike_dem(uint64_t seed, uint32_t max_detectors, uint32_t max_mechanisms,
                         uint32_t num_observables) {
    CounterRng rng(seed, 0xD3A11CE);
    Dem dem;
    dem.num_detectors = 2 + rng.next_below(max_detectors - 1);
    dem.num_observables = num_observables;

    // Distinct edges of the defect graph (pairs plus boundary stubs), the
    // shape real models have after identical symptoms are merged.
    std::vector<std::pair<uint32_t, uint32_t>> pool;
    for (uint32_t i = 0; i < dem.num_detectors; i++) {
        pool.push_back({i, kObsFlag});  // boundary stub, second slot unused
        for (uint32_t j = i + 1; j < dem.num_detectors; j++) pool.push_back({i, j});
    }
    for (size_t i = pool.size() - 1; i > 0; i--) {
        std::swap(pool[i], pool[rng.next_below(i + 1)]);
    }
    uint32_t m = std::max<uint64_t>(dem.num_detectors, 1 + rng.next_below(max_mechanisms));
    m = std::min<uint32_t>(m, pool.size());
    for (uint32_t j = 0; j < m; j++) {
        DemMechanism mech;
        mech.p = 0.02 + 0.13 * rng.next_unit();
        mech.symptom.push_back(pool[j].first);
        if (pool[j].second != kObsFlag) mech.symptom.push_back(pool[j].second);
        for (uint32_t o = 0; o < num_observables; o++) {
            if (rng.next_bernoulli(0.3)) mech.symptom.push_back(kObsFlag | o);
        }
        dem.mechanisms.push_back(std::move(mech));
    }
    return dem;
}

}  // namespace qecforge
