#include "qecforge/arch/device.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace qecforge;

namespace {

size_t max_degree(const Device &d, bool include_shuttle = false) {
    auto adj = d.adjacency(include_shuttle);
    size_t best = 0;
    for (const auto &nbrs : adj) best = std::max(best, nbrs.size());
    return best;
}

}  // namespace

TEST(Topology, GridCounts) {
    Device d = make_topology(TopologyKind::grid, {15, 20});
    EXPECT_EQ(d.qubits.size(), 300u);
    EXPECT_EQ(d.edges.size(), 565u);
    EXPECT_TRUE(d.is_connected());
    EXPECT_LE(max_degree(d), 4u);
}

TEST(Topology, LineAndComplete) {
    Device line = make_topology(TopologyKind::line, {10});
    EXPECT_EQ(line.qubits.size(), 10u);
    EXPECT_EQ(line.edges.size(), 9u);
    EXPECT_LE(max_degree(line), 2u);

    Device k7 = make_topology(TopologyKind::complete, {7});
    EXPECT_EQ(k7.qubits.size(), 7u);
    EXPECT_EQ(k7.edges.size(), 21u);
    EXPECT_EQ(max_degree(k7), 6u);
}

TEST(Topology, CuboidCounts) {
    Device d = make_topology(TopologyKind::cuboid, {5, 6, 10});
    EXPECT_EQ(d.qubits.size(), 300u);
    // 4*6*10 + 5*5*10 + 5*6*9 nearest-neighbor links.
    EXPECT_EQ(d.edges.size(), 240u + 250u + 270u);
    EXPECT_TRUE(d.is_connected());
    EXPECT_LE(max_degree(d), 6u);
}

TEST(Topology, HeavyHexIsDegreeThreeAndConnected) {
    Device d = make_topology(TopologyKind::heavy_hex, {3, 4});
    // 12 brick vertices plus one bridge qubit per coupler (9 horiz + 4 vert).
    EXPECT_EQ(d.qubits.size(), 25u);
    EXPECT_EQ(d.edges.size(), 26u);
    EXPECT_TRUE(d.is_connected());
    EXPECT_LE(max_degree(d), 3u);

    Device big = make_topology(TopologyKind::heavy_hex, {7, 9});
    EXPECT_TRUE(big.is_connected());
    EXPECT_LE(max_degree(big), 3u);
}

TEST(Topology, RejectsBadDims) {
    EXPECT_THROW(make_topology(TopologyKind::grid, {5}), std::invalid_argument);
    EXPECT_THROW(make_topology(TopologyKind::line, {0}), std::invalid_argument);
    EXPECT_THROW(make_topology(TopologyKind::cuboid, {2, 2}), std::invalid_argument);
    EXPECT_THROW(topology_kind_from_name("torus"), std::invalid_argument);
    EXPECT_EQ(topology_kind_from_name("heavy_hex"), TopologyKind::heavy_hex);
}

TEST(Presets, QubitCounts) {
    EXPECT_EQ(device_preset("willow_x3").qubits.size(), 315u);
    EXPECT_EQ(device_preset("infleqtion_x16").qubits.size(), 384u);
    EXPECT_EQ(device_preset("apollo_768").qubits.size(), 768u);
    EXPECT_EQ(device_preset("flamingo").qubits.size(), 468u);
    EXPECT_EQ(device_preset("nighthawk").qubits.size(), 360u);
    EXPECT_THROW(device_preset("osprey"), std::invalid_argument);
}

TEST(Presets, AllConnectedWithRates) {
    for (const char *name :
         {"willow_x3", "apollo_768", "infleqtion_x16", "flamingo", "nighthawk"}) {
        Device d = device_preset(name);
        EXPECT_TRUE(d.is_connected()) << name;
        ASSERT_TRUE(d.rates.has_value()) << name;
        EXPECT_GT(d.rates->p_2q, 0.0) << name;
    }
    EXPECT_DOUBLE_EQ(device_preset("willow_x3").rates->p_1q, 6.2e-4);
    EXPECT_DOUBLE_EQ(device_preset("willow_x3").rates->p_idle, 9.0e-3);
    EXPECT_DOUBLE_EQ(device_preset("apollo_768").rates->p_spam, 1.33e-4);
    EXPECT_DOUBLE_EQ(device_preset("infleqtion_x16").rates->p_2q, 6.5e-3);
}

TEST(Presets, FlamingoHasNoisySparseInterQpuLinks) {
    Device d = device_preset("flamingo");
    ASSERT_EQ(d.qpu_of.size(), d.qubits.size());
    EXPECT_EQ(*std::max_element(d.qpu_of.begin(), d.qpu_of.end()), 2u);
    size_t inter = 0;
    for (const auto &e : d.edges) {
        if (e.link == LinkClass::inter_qpu) {
            inter++;
            EXPECT_NE(d.qpu_of[e.a], d.qpu_of[e.b]);
            EXPECT_DOUBLE_EQ(e.error_scale, 10.0);
        } else {
            EXPECT_EQ(d.qpu_of[e.a], d.qpu_of[e.b]);
        }
    }
    EXPECT_EQ(inter, 6u);  // 3 links for each adjacent tile pair
}

TEST(Presets, NighthawkInteriorDegreeSixEqualLinkQuality) {
    Device d = device_preset("nighthawk");
    auto adj = d.adjacency(true);
    // A qubit away from the tile boundary: row 5, col 5 of the first tile.
    EXPECT_EQ(adj[5 * 12 + 5].size(), 6u);
    for (const auto &e : d.edges) {
        EXPECT_DOUBLE_EQ(e.error_scale, 1.0);
    }
    EXPECT_TRUE(d.is_connected());
}

TEST(Shuttling, AddsDiagonalsOnSmallGrid) {
    Device d = add_shuttling(make_topology(TopologyKind::grid, {2, 2}), 1.0, 1.0);
    size_t shuttle = 0;
    for (const auto &e : d.edges) {
        if (e.link == LinkClass::shuttle) {
            shuttle++;
            EXPECT_NEAR(e.duration_us, 2.0 * std::sqrt(2.0), 1e-12);
        }
    }
    EXPECT_EQ(shuttle, 2u);
    EXPECT_TRUE(d.has_shuttling());
}

TEST(Shuttling, DurationIsRoundTripOverDistance) {
    Device d;
    d.qubits.push_back({0, 0, 0});
    d.qubits.push_back({1, 3, 4});
    d = add_shuttling(std::move(d), 1.0, 1.0);
    ASSERT_EQ(d.edges.size(), 1u);
    EXPECT_DOUBLE_EQ(d.edges[0].duration_us, 10.0);

    Device slow;
    slow.qubits.push_back({0, 0, 0});
    slow.qubits.push_back({1, 3, 4});
    slow = add_shuttling(std::move(slow), 2.0, 4.0);
    EXPECT_DOUBLE_EQ(slow.edges[0].duration_us, 5.0);
}

TEST(Shuttling, CompleteGraphUnchangedAndRerunIsNoop) {
    Device k5 = make_topology(TopologyKind::complete, {5});
    Device after = add_shuttling(k5, 1.0, 1.0);
    EXPECT_EQ(after.edges.size(), k5.edges.size());
    EXPECT_FALSE(after.has_shuttling());

    Device once = add_shuttling(make_topology(TopologyKind::grid, {3, 3}), 1.0, 1.0);
    Device twice = add_shuttling(once, 1.0, 1.0);
    EXPECT_EQ(twice.edges.size(), once.edges.size());
    // The augmented device is all-to-all.
    EXPECT_EQ(once.edges.size(), 9u * 8u / 2u);

    EXPECT_THROW(add_shuttling(k5, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(add_shuttling(k5, 1.0, 0.0), std::invalid_argument);
}

TEST(QubitQuality, ReproducibleAndClipped) {
    Device base = make_topology(TopologyKind::grid, {4, 4});
    Device a = sample_qubit_quality(base, 330.14, 142.84, 77);
    Device b = sample_qubit_quality(base, 330.14, 142.84, 77);
    Device c = sample_qubit_quality(base, 330.14, 142.84, 78);
    bool any_differs = false;
    for (size_t i = 0; i < a.qubits.size(); i++) {
        ASSERT_TRUE(a.qubits[i].t1_us.has_value());
        EXPECT_DOUBLE_EQ(*a.qubits[i].t1_us, *b.qubits[i].t1_us);
        EXPECT_DOUBLE_EQ(*a.qubits[i].t2_us, *b.qubits[i].t2_us);
        if (*a.qubits[i].t1_us != *c.qubits[i].t1_us) any_differs = true;
        EXPECT_GE(*a.qubits[i].t1_us, 1.0);
        EXPECT_LE(*a.qubits[i].t2_us, 2.0 * *a.qubits[i].t1_us + 1e-12);
    }
    EXPECT_TRUE(any_differs);
    a.validate();
}

TEST(QubitQuality, ZeroSpreadGivesIdenticalQubits) {
    Device d = sample_qubit_quality(make_topology(TopologyKind::line, {6}), 200.0, 0.0, 1);
    for (const auto &q : d.qubits) {
        EXPECT_DOUBLE_EQ(*q.t1_us, 200.0);
        EXPECT_DOUBLE_EQ(*q.t2_us, 200.0);
    }
}

TEST(QubitQuality, FloorPreventsNonpositiveTimes) {
    Device d = sample_qubit_quality(make_topology(TopologyKind::line, {64}), 1.5, 50.0, 3);
    for (const auto &q : d.qubits) {
        EXPECT_GE(*q.t1_us, 1.0);
        EXPECT_GE(*q.t2_us, 1.0);
        EXPECT_LE(*q.t2_us, 2.0 * *q.t1_us + 1e-12);
    }
}

TEST(DeviceIo, JsonRoundTrip) {
    Device d = sample_qubit_quality(device_preset("flamingo"), 330.14, 142.84, 5);
    std::string text = device_to_json(d);
    Device back = device_from_json(text);
    ASSERT_EQ(back.qubits.size(), d.qubits.size());
    ASSERT_EQ(back.edges.size(), d.edges.size());
    EXPECT_EQ(back.gateset, "heron");
    EXPECT_EQ(back.qpu_of, d.qpu_of);
    ASSERT_TRUE(back.rates.has_value());
    EXPECT_DOUBLE_EQ(back.rates->p_2q, 2.0e-3);
    for (size_t i = 0; i < d.qubits.size(); i++) {
        EXPECT_DOUBLE_EQ(*back.qubits[i].t1_us, *d.qubits[i].t1_us);
        EXPECT_DOUBLE_EQ(*back.qubits[i].t2_us, *d.qubits[i].t2_us);
    }
    for (size_t i = 0; i < d.edges.size(); i++) {
        EXPECT_EQ(back.edges[i].link, d.edges[i].link);
        EXPECT_DOUBLE_EQ(back.edges[i].error_scale, d.edges[i].error_scale);
    }
}

TEST(DeviceIo, ValidateCatchesBadDevices) {
    Device d;
    d.qubits.push_back({0, 0, 0});
    d.qubits.push_back({1, 1, 0});
    d.qubits[1].t1_us = 100.0;
    d.qubits[1].t2_us = 250.0;  // beyond the 2*T1 bound
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.qubits[1].t2_us = 150.0;
    d.edges.push_back({0, 5, LinkClass::local, 0.05, 1.0});
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d.edges[0].b = 1;
    EXPECT_NO_THROW(d.validate());
    EXPECT_EQ(d.find_edge(1, 0), &d.edges[0]);
    EXPECT_EQ(d.find_edge(0, 0), nullptr);
}
