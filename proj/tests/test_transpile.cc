#include "qecforge/transpile/transpile.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "qecforge/codes/codes.h"
#include "qecforge/sim/frame.h"
#include "qecforge/util/rng.h"

using namespace qecforge;

namespace {

TrackerLog identity_tracker(uint32_t n) {
    TrackerLog t;
    t.initial_mapping.resize(n);
    for (uint32_t q = 0; q < n; q++) t.initial_mapping[q] = q;
    t.final_mapping = t.initial_mapping;
    return t;
}

bool all_native(const Circuit &c, GateSetId g) {
    for (const auto &inst : c.instructions) {
        if (!op_is_unitary(inst.op)) continue;
        bool ok = false;
        switch (g) {
            case GateSetId::stim_clifford: ok = true; break;
            case GateSetId::heron:
                ok = inst.op == Op::CZ || inst.op == Op::SX || inst.op == Op::X ||
                     inst.op == Op::RZ;
                break;
            case GateSetId::h2:
                ok = inst.op == Op::RZZ || inst.op == Op::SX || inst.op == Op::SX_DAG ||
                     inst.op == Op::X || inst.op == Op::Y || inst.op == Op::RZ;
                break;
        }
        if (!ok) return false;
    }
    return true;
}

uint32_t count_op(const Circuit &c, Op op) {
    uint32_t n = 0;
    for (const auto &inst : c.instructions) {
        if (inst.op == op) n += op_is_two_qubit(op) ? inst.targets.size() / 2 : 1;
    }
    return n;
}

// Random unitary circuit over n qubits; mixes every gate the IR knows.
Circuit random_clifford(uint32_t n, uint32_t len, uint64_t seed) {
    Circuit c;
    for (uint32_t q = 0; q < n; q++) c.append(Op::H, {Target::qubit(q)});
    for (uint32_t i = 0; i < len; i++) {
        uint64_t w = keyed_u64(seed, 0xC11F, i);
        uint32_t a = (w >> 8) % n;
        switch (w % 10) {
            case 0: c.append(Op::H, {Target::qubit(a)}); break;
            case 1: c.append(Op::S, {Target::qubit(a)}); break;
            case 2: c.append(Op::SX, {Target::qubit(a)}); break;
            case 3: c.append(Op::X, {Target::qubit(a)}); break;
            case 4: c.append(Op::RZ, {Target::qubit(a)}, {static_cast<double>((w >> 20) & 3)}); break;
            default: {
                if (n < 2) break;
                uint32_t b = (w >> 16) % (n - 1);
                if (b >= a) b++;
                Op g = std::array{Op::CX, Op::CZ, Op::SWAP, Op::CX, Op::RZZ}[w % 10 - 5];
                c.append(g, {Target::qubit(a), Target::qubit(b)});
                break;
            }
        }
    }
    return c;
}

}  // namespace

TEST(Translate, SingleGatesStayEquivalentAndNative) {
    struct Probe {
        Op op;
        double k;
    };
    std::vector<Probe> probes = {{Op::X, 0},      {Op::Y, 0},  {Op::Z, 0},  {Op::H, 0},
                                 {Op::S, 0},      {Op::S_DAG, 0}, {Op::SX, 0}, {Op::SX_DAG, 0},
                                 {Op::RZ, 1},     {Op::RZ, 2}, {Op::RZ, 3}};
    for (GateSetId g : {GateSetId::stim_clifford, GateSetId::heron, GateSetId::h2}) {
        for (const auto &p : probes) {
            Circuit c;
            std::vector<double> params;
            if (p.op == Op::RZ) params = {p.k};
            c.append(p.op, {Target::qubit(0)}, params);
            c.num_qubits = 2;
            Circuit out = translate(c, g);
            EXPECT_TRUE(all_native(out, g)) << gateset_name(g) << " " << op_info(p.op).name;
            EXPECT_TRUE(tableau_equivalent_mod_tracker(c, out, identity_tracker(2)))
                << gateset_name(g) << " " << op_info(p.op).name;
        }
        for (Op op : {Op::CX, Op::CZ, Op::SWAP, Op::RZZ}) {
            Circuit c;
            c.append(op, {Target::qubit(0), Target::qubit(1)});
            Circuit out = translate(c, g);
            EXPECT_TRUE(all_native(out, g)) << gateset_name(g) << " " << op_info(op).name;
            EXPECT_TRUE(tableau_equivalent_mod_tracker(c, out, identity_tracker(2)))
                << gateset_name(g) << " " << op_info(op).name;
        }
    }
}

TEST(Translate, SwapBecomesThreeEntanglerBlocks) {
    Circuit swap;
    swap.append(Op::SWAP, {Target::qubit(0), Target::qubit(1)});
    Circuit heron = translate(swap, GateSetId::heron);
    EXPECT_EQ(count_op(heron, Op::CZ), 3u);
    EXPECT_EQ(count_op(heron, Op::SWAP), 0u);
    Circuit h2 = translate(swap, GateSetId::h2);
    EXPECT_EQ(count_op(h2, Op::RZZ), 3u);
    Circuit stim = translate(swap, GateSetId::stim_clifford);
    EXPECT_EQ(count_op(stim, Op::SWAP), 1u);
}

TEST(Translate, HeronCxUsesSingleCz) {
    Circuit cx;
    cx.append(Op::CX, {Target::qubit(0), Target::qubit(1)});
    Circuit out = translate(cx, GateSetId::heron);
    EXPECT_EQ(count_op(out, Op::CZ), 1u);
    EXPECT_TRUE(all_native(out, GateSetId::heron));
}

TEST(Translate, RandomCircuitsEquivalentOnEveryGateSet) {
    for (GateSetId g : {GateSetId::stim_clifford, GateSetId::heron, GateSetId::h2}) {
        for (uint64_t seed = 0; seed < 8; seed++) {
            Circuit c = random_clifford(5, 30, seed);
            for (bool opt : {false, true}) {
                Circuit out = translate(c, g, opt);
                EXPECT_TRUE(all_native(out, g)) << gateset_name(g) << " seed " << seed;
                EXPECT_TRUE(tableau_equivalent_mod_tracker(c, out, identity_tracker(5)))
                    << gateset_name(g) << " seed " << seed << " opt " << opt;
            }
        }
    }
}

TEST(Translate, TranslationIsIdempotentOnGateCounts) {
    for (GateSetId g : {GateSetId::stim_clifford, GateSetId::heron, GateSetId::h2}) {
        for (bool opt : {false, true}) {
            Circuit c = random_clifford(6, 40, 99);
            Circuit once = translate(c, g, opt);
            Circuit twice = translate(once, g, opt);
            EXPECT_EQ(count_ops(twice), count_ops(once)) << gateset_name(g) << " opt " << opt;
        }
    }
}

TEST(Translate, OptimizeCancelsInversePairsAndRuns) {
    Circuit c = parse_circuit("H 0\nH 0\nCX 0 1\nCX 0 1\nS 2\nS_DAG 2\n");
    Circuit out = translate(c, GateSetId::stim_clifford, true);
    EXPECT_EQ(count_ops(out), 0u);

    Circuit half = parse_circuit("S 0\nS 0\n");
    Circuit merged = translate(half, GateSetId::stim_clifford, true);
    EXPECT_EQ(count_ops(merged), 1u);  // S*S collapses to Z
    EXPECT_EQ(merged.instructions[0].op, Op::Z);

    Circuit rzz = parse_circuit("RZZ 0 1\nRZZ 0 1\n");
    Circuit z2 = translate(rzz, GateSetId::stim_clifford, true);
    EXPECT_TRUE(tableau_equivalent_mod_tracker(rzz, z2, identity_tracker(2)));
    EXPECT_EQ(count_op(z2, Op::RZZ), 0u);
}

TEST(Translate, MeasurementsAndDetectorsPassThrough) {
    Circuit mem = generate_memory(CodeSpec{CodeFamily::repetition, 3, 2});
    Circuit out = translate(mem, GateSetId::heron);
    EXPECT_TRUE(all_native(out, GateSetId::heron));
    EXPECT_EQ(out.num_measurements, mem.num_measurements);
    EXPECT_EQ(out.num_detectors, mem.num_detectors);
    FrameSampleResult r = frame_sample(out, 64, 11);
    for (uint32_t det = 0; det < out.num_detectors; det++) {
        EXPECT_EQ(r.detectors.count_bit(det), 0u);
    }
}

TEST(Layout, TrivialAndErrors) {
    Device d = make_topology(TopologyKind::grid, {3, 3});
    Circuit c = random_clifford(4, 10, 1);
    LayoutMap l = layout(c, d, LayoutStrategy::trivial);
    EXPECT_EQ(l.logical_to_physical, (std::vector<uint32_t>{0, 1, 2, 3}));
    Circuit big = random_clifford(10, 10, 1);
    EXPECT_THROW(layout(big, d, LayoutStrategy::trivial), std::invalid_argument);
}

TEST(Layout, DensePicksTightBlock) {
    Device d = make_topology(TopologyKind::grid, {3, 3});
    Circuit c = random_clifford(4, 10, 2);
    LayoutMap l = layout(c, d, LayoutStrategy::dense);
    EXPECT_EQ(l.logical_to_physical, (std::vector<uint32_t>{0, 1, 3, 4}));
}

TEST(Layout, SabreIsSeededAndInjective) {
    Device d = make_topology(TopologyKind::grid, {4, 4});
    Circuit c = random_clifford(8, 40, 3);
    LayoutMap a = layout(c, d, LayoutStrategy::sabre, 7);
    LayoutMap b = layout(c, d, LayoutStrategy::sabre, 7);
    EXPECT_EQ(a.logical_to_physical, b.logical_to_physical);
    std::vector<uint32_t> sorted = a.logical_to_physical;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
    EXPECT_LT(sorted.back(), 16u);
}

TEST(Routing, ShortLineNeedsOneSwap) {
    Device line = make_topology(TopologyKind::line, {3});
    Circuit c;
    c.append(Op::CX, {Target::qubit(0), Target::qubit(2)});
    LayoutMap l = layout(c, line, LayoutStrategy::trivial);
    RouteResult r = route(c, line, l, RoutingStrategy::basic, 0);
    EXPECT_EQ(r.metrics.swaps_inserted, 1u);
    EXPECT_EQ(r.metrics.extra_2q, 3u);
    EXPECT_DOUBLE_EQ(r.metrics.pct_of_original_2q, 300.0);
    EXPECT_TRUE(gates_on_device(r.circuit, line));
    EXPECT_TRUE(tracker_consistent(r.tracker));
    EXPECT_TRUE(tableau_equivalent_mod_tracker(c, r.circuit, r.tracker));
}

TEST(Routing, CompleteGraphNeverSwaps) {
    Device k8 = make_topology(TopologyKind::complete, {8});
    for (RoutingStrategy s :
         {RoutingStrategy::basic, RoutingStrategy::stochastic, RoutingStrategy::sabre}) {
        for (uint64_t seed = 0; seed < 3; seed++) {
            Circuit c = random_clifford(8, 60, seed + 20);
            LayoutMap l = layout(c, k8, LayoutStrategy::trivial);
            RouteResult r = route(c, k8, l, s, seed);
            EXPECT_EQ(r.metrics.swaps_inserted, 0u) << routing_strategy_name(s);
            EXPECT_DOUBLE_EQ(r.metrics.pct_of_original_2q, 0.0);
            EXPECT_TRUE(tableau_equivalent_mod_tracker(c, r.circuit, r.tracker));
        }
    }
}

TEST(Routing, AllStrategyCombosPreserveSemantics) {
    Device grid = make_topology(TopologyKind::grid, {3, 3});
    for (LayoutStrategy ls : {LayoutStrategy::trivial, LayoutStrategy::dense, LayoutStrategy::sabre}) {
        for (RoutingStrategy rs :
             {RoutingStrategy::basic, RoutingStrategy::stochastic, RoutingStrategy::sabre}) {
            for (uint64_t seed = 0; seed < 4; seed++) {
                Circuit c = random_clifford(6, 25, 100 + seed);
                LayoutMap l = layout(c, grid, ls, seed);
                RouteResult r = route(c, grid, l, rs, seed);
                EXPECT_TRUE(gates_on_device(r.circuit, grid));
                EXPECT_TRUE(tracker_consistent(r.tracker));
                EXPECT_TRUE(tableau_equivalent_mod_tracker(c, r.circuit, r.tracker))
                    << layout_strategy_name(ls) << "/" << routing_strategy_name(rs) << "/" << seed;
                for (GateSetId g : {GateSetId::heron, GateSetId::h2}) {
                    Circuit translated = translate(r.circuit, g);
                    EXPECT_TRUE(tableau_equivalent_mod_tracker(c, translated, r.tracker))
                        << gateset_name(g);
                }
            }
        }
    }
}

TEST(Routing, DeterministicPerSeed) {
    Device grid = make_topology(TopologyKind::grid, {3, 3});
    Circuit c = random_clifford(7, 50, 5);
    LayoutMap l = layout(c, grid, LayoutStrategy::trivial);
    Circuit a = route(c, grid, l, RoutingStrategy::stochastic, 42).circuit;
    Circuit b = route(c, grid, l, RoutingStrategy::stochastic, 42).circuit;
    EXPECT_EQ(emit_circuit(a), emit_circuit(b));
}

TEST(Routing, MemoryCircuitSurvivesRouting) {
    Circuit mem = generate_memory(CodeSpec{CodeFamily::rotated_surface, 3, 2});
    Device grid = make_topology(TopologyKind::grid, {5, 5});
    LayoutMap l = layout(mem, grid, LayoutStrategy::dense);
    RouteResult r = route(mem, grid, l, RoutingStrategy::sabre, 1);
    EXPECT_TRUE(gates_on_device(r.circuit, grid));
    EXPECT_EQ(r.circuit.num_measurements, mem.num_measurements);
    EXPECT_EQ(r.circuit.num_detectors, mem.num_detectors);
    FrameSampleResult quiet = frame_sample(r.circuit, 64, 3);
    for (uint32_t det = 0; det < r.circuit.num_detectors; det++) {
        EXPECT_EQ(quiet.detectors.count_bit(det), 0u);
    }
}

TEST(Routing, RicherTopologyRoutesCheaper) {
    Circuit mem = generate_memory(CodeSpec{CodeFamily::steane_concat, 3, 1});
    Device grid = make_topology(TopologyKind::grid, {4, 4});
    Device cube = make_topology(TopologyKind::cuboid, {2, 2, 4});
    uint32_t grid_swaps = 0, cube_swaps = 0;
    for (uint64_t seed = 0; seed < 5; seed++) {
        grid_swaps += route(mem, grid, layout(mem, grid, LayoutStrategy::dense), RoutingStrategy::sabre, seed)
                          .metrics.swaps_inserted;
        cube_swaps += route(mem, cube, layout(mem, cube, LayoutStrategy::dense), RoutingStrategy::sabre, seed)
                          .metrics.swaps_inserted;
    }
    EXPECT_GT(grid_swaps, cube_swaps);
    EXPECT_GT(cube_swaps, 0u);
}

TEST(Routing, SabreLayoutBeatsTrivialOnSurfaceGrid) {
    Circuit mem = generate_memory(CodeSpec{CodeFamily::rotated_surface, 3, 2});
    Device grid = make_topology(TopologyKind::grid, {5, 5});
    std::vector<uint32_t> sabre_swaps, trivial_swaps;
    for (uint64_t seed = 0; seed < 20; seed++) {
        sabre_swaps.push_back(route(mem, grid, layout(mem, grid, LayoutStrategy::sabre, seed),
                                    RoutingStrategy::sabre, seed)
                                  .metrics.swaps_inserted);
        trivial_swaps.push_back(route(mem, grid, layout(mem, grid, LayoutStrategy::trivial),
                                      RoutingStrategy::sabre, seed)
                                    .metrics.swaps_inserted);
    }
    std::sort(sabre_swaps.begin(), sabre_swaps.end());
    std::sort(trivial_swaps.begin(), trivial_swaps.end());
    EXPECT_LE(sabre_swaps[10], trivial_swaps[10]);
}

TEST(Metrics, OverheadArithmetic) {
    Circuit before;
    for (int i = 0; i < 10; i++) before.append(Op::CX, {Target::qubit(0), Target::qubit(1)});
    Circuit after = before;
    after.append(Op::SWAP, {Target::qubit(0), Target::qubit(1)});
    after.append(Op::SWAP, {Target::qubit(0), Target::qubit(1)});
    SwapMetrics m = overhead_metrics(before, after);
    EXPECT_EQ(m.swaps_inserted, 2u);
    EXPECT_EQ(m.extra_2q, 6u);
    EXPECT_DOUBLE_EQ(m.pct_of_original_2q, 60.0);

    SwapMetrics none = overhead_metrics(before, before);
    EXPECT_EQ(none.swaps_inserted, 0u);
    EXPECT_DOUBLE_EQ(none.pct_of_original_2q, 0.0);

    // 10 swaps against 100 original gates comes out at 30%.
    Circuit hundred;
    for (int i = 0; i < 100; i++) hundred.append(Op::CZ, {Target::qubit(0), Target::qubit(1)});
    Circuit plus10 = hundred;
    for (int i = 0; i < 10; i++) plus10.append(Op::SWAP, {Target::qubit(0), Target::qubit(1)});
    EXPECT_DOUBLE_EQ(overhead_metrics(hundred, plus10).pct_of_original_2q, 30.0);
}

TEST(Names, RoundTrip) {
    EXPECT_EQ(layout_strategy_from_name("dense"), LayoutStrategy::dense);
    EXPECT_EQ(routing_strategy_from_name("stochastic"), RoutingStrategy::stochastic);
    EXPECT_EQ(gateset_from_name("h2"), GateSetId::h2);
    EXPECT_EQ(gateset_from_name("stim"), GateSetId::stim_clifford);
    EXPECT_THROW(layout_strategy_from_name("lookahead"), std::invalid_argument);
    EXPECT_THROW(routing_strategy_from_name("teleport"), std::invalid_argument);
    EXPECT_THROW(gateset_from_name("iswap"), std::invalid_argument);
}
