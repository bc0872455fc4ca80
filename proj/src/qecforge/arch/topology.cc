#include <cmath>
#include <map>
#include <stdexcept>

#include "qecforge/arch/device.h"
#include "qecforge/util/rng.h"

namespace qecforge {

namespace {

constexpr double kDefault2qUs = 0.05;

void push_qubit(Device &d, double x, double y, double z = 0) {
    DeviceQubit q;
    q.id = static_cast<uint32_t>(d.qubits.size());
    q.x = x;
    q.y = y;
    q.z = z;
    d.qubits.push_back(q);
}

void push_edge(Device &d, uint32_t a, uint32_t b, LinkClass link = LinkClass::local,
               double duration = kDefault2qUs, double scale = 1.0) {
    DeviceEdge e;
    e.a = a;
    e.b = b;
    e.link = link;
    e.duration_us = duration;
    e.error_scale = scale;
    d.edges.push_back(e);
}

Device make_line(uint32_t n) {
    Device d;
    d.name = "line";
    for (uint32_t i = 0; i < n; i++) push_qubit(d, i, 0);
    for (uint32_t i = 0; i + 1 < n; i++) push_edge(d, i, i + 1);
    return d;
}

Device make_grid(uint32_t rows, uint32_t cols) {
    Device d;
    d.name = "grid";
    auto at = [cols](uint32_t r, uint32_t c) { return r * cols + c; };
    for (uint32_t r = 0; r < rows; r++) {
        for (uint32_t c = 0; c < cols; c++) push_qubit(d, c, r);
    }
    for (uint32_t r = 0; r < rows; r++) {
        for (uint32_t c = 0; c < cols; c++) {
            if (c + 1 < cols) push_edge(d, at(r, c), at(r, c + 1));
            if (r + 1 < rows) push_edge(d, at(r, c), at(r + 1, c));
        }
    }
    return d;
}

Device make_cuboid(uint32_t nx, uint32_t ny, uint32_t nz) {
    Device d;
    d.name = "cuboid";
    auto at = [ny, nz](uint32_t x, uint32_t y, uint32_t z) { return (x * ny + y) * nz + z; };
    for (uint32_t x = 0; x < nx; x++) {
        for (uint32_t y = 0; y < ny; y++) {
            for (uint32_t z = 0; z < nz; z++) push_qubit(d, x, y, z);
        }
    }
    for (uint32_t x = 0; x < nx; x++) {
        for (uint32_t y = 0; y < ny; y++) {
            for (uint32_t z = 0; z < nz; z++) {
                if (x + 1 < nx) push_edge(d, at(x, y, z), at(x + 1, y, z));
                if (y + 1 < ny) push_edge(d, at(x, y, z), at(x, y + 1, z));
                if (z + 1 < nz) push_edge(d, at(x, y, z), at(x, y, z + 1));
            }
        }
    }
    return d;
}

// Brick-wall lattice with every coupler subdivided by an extra qubit, so
// brick vertices keep degree <= 3 and bridge qubits have degree 2.
Device make_heavy_hex(uint32_t rows, uint32_t cols) {
    Device d;
    d.name = "heavy_hex";
    auto vertex = [cols](uint32_t r, uint32_t c) { return r * cols + c; };
    for (uint32_t r = 0; r < rows; r++) {
        for (uint32_t c = 0; c < cols; c++) push_qubit(d, c, r);
    }
    auto bridge = [&](uint32_t a, uint32_t b) {
        const auto &qa = d.qubits[a];
        const auto &qb = d.qubits[b];
        uint32_t mid = static_cast<uint32_t>(d.qubits.size());
        push_qubit(d, (qa.x + qb.x) / 2, (qa.y + qb.y) / 2);
        push_edge(d, a, mid);
        push_edge(d, mid, b);
    };
    for (uint32_t r = 0; r < rows; r++) {
        for (uint32_t c = 0; c < cols; c++) {
            if (c + 1 < cols) bridge(vertex(r, c), vertex(r, c + 1));
            if (r + 1 < rows && c % 2 == r % 2) bridge(vertex(r, c), vertex(r + 1, c));
        }
    }
    return d;
}

Device make_complete(uint32_t n) {
    Device d;
    d.name = "complete";
    // Circle placement keeps coordinates distinct without implying geometry.
    for (uint32_t i = 0; i < n; i++) {
        double ang = 2.0 * M_PI * i / std::max<uint32_t>(n, 1);
        push_qubit(d, std::cos(ang), std::sin(ang));
    }
    for (uint32_t a = 0; a < n; a++) {
        for (uint32_t b = a + 1; b < n; b++) push_edge(d, a, b);
    }
    return d;
}

}  // namespace

TopologyKind topology_kind_from_name(const std::string &name) {
    if (name == "line") return TopologyKind::line;
    if (name == "grid") return TopologyKind::grid;
    if (name == "cuboid") return TopologyKind::cuboid;
    if (name == "heavy_hex") return TopologyKind::heavy_hex;
    if (name == "complete" || name == "all_to_all") return TopologyKind::complete;
    throw std::invalid_argument("unknown topology '" + name + "'");
}

Device make_topology(TopologyKind kind, const std::vector<uint32_t> &dims) {
    auto need = [&](size_t n) {
        if (dims.size() != n) {
            throw std::invalid_argument("topology expects " + std::to_string(n) + " dimension(s)");
        }
        for (uint32_t v : dims) {
            if (v == 0) throw std::invalid_argument("topology dimensions must be positive");
        }
    };
    Device d;
    switch (kind) {
        case TopologyKind::line:
            need(1);
            d = make_line(dims[0]);
            break;
        case TopologyKind::grid:
            need(2);
            d = make_grid(dims[0], dims[1]);
            break;
        case TopologyKind::cuboid:
            need(3);
            d = make_cuboid(dims[0], dims[1], dims[2]);
            break;
        case TopologyKind::heavy_hex:
            need(2);
            d = make_heavy_hex(dims[0], dims[1]);
            break;
        case TopologyKind::complete:
            need(1);
            d = make_complete(dims[0]);
            break;
    }
    d.validate();
    return d;
}

Device add_shuttling(Device d, double pitch, double max_speed) {
    if (max_speed <= 0 || pitch <= 0) {
        throw std::invalid_argument("shuttle pitch and speed must be positive");
    }
    if (d.has_shuttling()) return d;  // already augmented
    size_t n = d.qubits.size();
    std::vector<char> adjacent(n * n, 0);
    for (const auto &e : d.edges) {
        adjacent[e.a * n + e.b] = 1;
        adjacent[e.b * n + e.a] = 1;
    }
    for (uint32_t a = 0; a < n; a++) {
        for (uint32_t b = a + 1; b < n; b++) {
            if (adjacent[a * n + b]) continue;
            double duration = 2.0 * d.distance(a, b) * pitch / max_speed;
            push_edge(d, a, b, LinkClass::shuttle, duration, 1.0);
        }
    }
    d.validate();
    return d;
}

Device sample_qubit_quality(Device d, double mean_t_us, double stddev_us, uint64_t seed) {
    if (mean_t_us <= 0 || stddev_us < 0) {
        throw std::invalid_argument("bad coherence time distribution");
    }
    constexpr uint64_t kT1Stream = 0x7157AB1E;
    constexpr uint64_t kT2Stream = 0x7257AB1E;
    for (auto &q : d.qubits) {
        double t1 = mean_t_us + stddev_us * keyed_gauss(seed, kT1Stream, q.id);
        double t2 = mean_t_us + stddev_us * keyed_gauss(seed, kT2Stream, q.id);
        t1 = std::max(t1, 1.0);
        t2 = std::max(t2, 1.0);
        q.t1_us = t1;
        q.t2_us = std::min(t2, 2.0 * t1);
    }
    return d;
}

}  // namespace qecforge
