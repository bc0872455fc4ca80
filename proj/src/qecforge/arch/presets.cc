#include <stdexcept>

#include "qecforge/arch/device.h"

namespace qecforge {

namespace {

DeviceRates willow_rates() {
    return DeviceRates{6.2e-4, 2.8e-3, 9.5e-3, 9.0e-3, 5.5e-4, 2.5e-4};
}

DeviceRates flamingo_rates() {
    return DeviceRates{2.5e-4, 2.0e-3, 2.5e-4, 0.0, 0.0, 0.0};
}

DeviceRates apollo_rates() {
    return DeviceRates{8.0e-6, 1.4e-4, 1.33e-4, 5.3e-5, 6.3e-7, 4.3e-5};
}

DeviceRates infleqtion_rates() {
    return DeviceRates{9.8e-4, 6.5e-3, 4.0e-3, 0.0, 0.0, 0.0};
}

// Chain of QPU tiles: each tile is copied with a coordinate offset, then
// consecutive tiles are joined by a few boundary links.
struct TileChain {
    Device device;
    std::vector<uint32_t> tile_base;
};

TileChain chain_tiles(const Device &tile, uint32_t count, double x_gap, LinkClass link,
                      double link_duration, double link_scale,
                      const std::vector<std::pair<uint32_t, uint32_t>> &boundary_pairs) {
    TileChain out;
    double tile_width = 0;
    for (const auto &q : tile.qubits) tile_width = std::max(tile_width, q.x);
    for (uint32_t t = 0; t < count; t++) {
        uint32_t base = static_cast<uint32_t>(out.device.qubits.size());
        out.tile_base.push_back(base);
        double off = t * (tile_width + x_gap);
        for (const auto &q : tile.qubits) {
            DeviceQubit nq = q;
            nq.id = base + q.id;
            nq.x += off;
            out.device.qubits.push_back(nq);
            out.device.qpu_of.push_back(t);
        }
        for (const auto &e : tile.edges) {
            DeviceEdge ne = e;
            ne.a += base;
            ne.b += base;
            out.device.edges.push_back(ne);
        }
    }
    for (uint32_t t = 0; t + 1 < count; t++) {
        for (const auto &[from, to] : boundary_pairs) {
            DeviceEdge e;
            e.a = out.tile_base[t] + from;
            e.b = out.tile_base[t + 1] + to;
            e.link = link;
            e.duration_us = link_duration;
            e.error_scale = link_scale;
            out.device.edges.push_back(e);
        }
    }
    return out;
}

Device make_flamingo() {
    // Three grid tiles joined by sparse long-range couplers that are about
    // an order of magnitude noisier than on-chip ones.
    constexpr uint32_t kRows = 12, kCols = 13;
    Device tile = make_topology(TopologyKind::grid, {kRows, kCols});
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (uint32_t r : {1u, 5u, 9u}) {
        pairs.push_back({r * kCols + (kCols - 1), r * kCols});
    }
    TileChain chain = chain_tiles(tile, 3, 3.0, LinkClass::inter_qpu, 0.5, 10.0, pairs);
    Device d = std::move(chain.device);
    d.name = "flamingo";
    d.gateset = "heron";
    d.rates = flamingo_rates();
    d.validate();
    return d;
}

Device make_nighthawk() {
    // Triangular-lattice tiles: square grid plus one diagonal per cell gives
    // six neighbors in the interior. Inter-tile links match local quality.
    constexpr uint32_t kRows = 10, kCols = 12;
    Device tile = make_topology(TopologyKind::grid, {kRows, kCols});
    auto at = [](uint32_t r, uint32_t c) { return r * kCols + c; };
    for (uint32_t r = 0; r + 1 < kRows; r++) {
        for (uint32_t c = 0; c + 1 < kCols; c++) {
            DeviceEdge e;
            e.a = at(r, c);
            e.b = at(r + 1, c + 1);
            e.duration_us = 0.05;
            tile.edges.push_back(e);
        }
    }
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (uint32_t r : {1u, 5u, 8u}) {
        pairs.push_back({at(r, kCols - 1), at(r, 0)});
    }
    TileChain chain = chain_tiles(tile, 3, 3.0, LinkClass::inter_qpu, 0.05, 1.0, pairs);
    Device d = std::move(chain.device);
    d.name = "nighthawk";
    d.gateset = "heron";
    d.rates = flamingo_rates();
    d.validate();
    return d;
}

}  // namespace

Device device_preset(const std::string &name) {
    if (name == "willow_x3") {
        Device d = make_topology(TopologyKind::grid, {15, 21});
        d.name = "willow_x3";
        d.gateset = "heron";
        d.rates = willow_rates();
        return d;
    }
    if (name == "apollo_768") {
        Device d = make_topology(TopologyKind::grid, {24, 32});
        d = add_shuttling(std::move(d), 1.0, 1.0);
        d.name = "apollo_768";
        d.gateset = "h2";
        d.rates = apollo_rates();
        return d;
    }
    if (name == "infleqtion_x16") {
        Device d = make_topology(TopologyKind::grid, {16, 24});
        d.name = "infleqtion_x16";
        d.gateset = "heron";
        d.rates = infleqtion_rates();
        return d;
    }
    if (name == "flamingo") return make_flamingo();
    if (name == "nighthawk") return make_nighthawk();
    throw std::invalid_argument("unknown device preset '" + name + "'");
}

}  // namespace qecforge
