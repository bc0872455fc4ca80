#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qecforge/codes/builder.h"
#include "qecforge/codes/codes.h"

namespace qecforge {

namespace {

// Rotated lattice: data qubits at odd-odd coordinates, measure qubits at
// even-even ones, boundary plaquettes trimmed so d^2-1 checks remain. The
// four-step CX schedules differ between X and Z plaquettes to keep hook
// errors off the logical operators.
struct SurfaceLattice {
    uint32_t d;
    std::map<std::pair<int, int>, uint32_t> id_at;
    std::vector<std::pair<int, int>> coord_of;
    std::vector<uint32_t> data, x_meas, z_meas, all_meas;

    explicit SurfaceLattice(uint32_t d) : d(d) {
        std::vector<std::pair<int, int>> coords;
        for (int y = 0; y < 2 * (int)d + 1; y++) {
            for (int x = 0; x < 2 * (int)d + 1; x++) {
                if (x % 2 == 1 && y % 2 == 1) {
                    coords.push_back({x, y});
                } else if (x % 2 == 0 && y % 2 == 0) {
                    int gx = x / 2, gy = y / 2;
                    bool parity = (gx % 2) != (gy % 2);
                    if ((gx == 0 || gx == (int)d) && parity) {
                        continue;
                    }
                    if ((gy == 0 || gy == (int)d) && !parity) {
                        continue;
                    }
                    coords.push_back({x, y});
                }
            }
        }
        for (auto &xy : coords) {
            uint32_t id = (uint32_t)coord_of.size();
            id_at[{xy.first, xy.second}] = id;
            coord_of.push_back(xy);
            if (xy.first % 2 == 1) {
                data.push_back(id);
            } else {
                bool parity = ((xy.first / 2) % 2) != ((xy.second / 2) % 2);
                (parity ? x_meas : z_meas).push_back(id);
                all_meas.push_back(id);
            }
        }
    }

    bool is_x_meas(uint32_t id) const {
        auto [x, y] = coord_of[id];
        return x % 2 == 0 && ((x / 2) % 2) != ((y / 2) % 2);
    }

    // Data neighbor of a measure qubit at the given diagonal offset.
    int neighbor(uint32_t meas, std::pair<int, int> delta) const {
        auto [x, y] = coord_of[meas];
        auto it = id_at.find({x + delta.first, y + delta.second});
        return it == id_at.end() ? -1 : (int)it->second;
    }
};

const std::pair<int, int> kXOrder[4] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
const std::pair<int, int> kZOrder[4] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

}  // namespace

Circuit generate_surface_memory(uint32_t d, uint32_t rounds) {
    SurfaceLattice lat(d);
    Circuit c;

    std::vector<uint32_t> all;
    for (uint32_t q = 0; q < lat.coord_of.size(); q++) {
        all.push_back(q);
    }
    add_gate(c, Op::R, all);

    std::vector<uint32_t> prev(lat.all_meas.size());
    for (uint32_t round = 0; round < rounds; round++) {
        add_tick(c);
        add_gate(c, Op::H, lat.x_meas);
        add_tick(c);
        for (int step = 0; step < 4; step++) {
            std::vector<uint32_t> pairs;
            for (uint32_t m : lat.all_meas) {
                if (lat.is_x_meas(m)) {
                    int dq = lat.neighbor(m, kXOrder[step]);
                    if (dq >= 0) {
                        pairs.push_back(m);
                        pairs.push_back((uint32_t)dq);
                    }
                } else {
                    int dq = lat.neighbor(m, kZOrder[step]);
                    if (dq >= 0) {
                        pairs.push_back((uint32_t)dq);
                        pairs.push_back(m);
                    }
                }
            }
            add_gate(c, Op::CX, pairs);
            add_tick(c);
        }
        add_gate(c, Op::H, lat.x_meas);
        add_tick(c);
        uint32_t first = add_measure(c, Op::MR, lat.all_meas);
        for (size_t i = 0; i < lat.all_meas.size(); i++) {
            if (round == 0) {
                if (!lat.is_x_meas(lat.all_meas[i])) {
                    add_detector(c, {first + (uint32_t)i});
                }
            } else {
                add_detector(c, {prev[i], first + (uint32_t)i});
            }
            prev[i] = first + (uint32_t)i;
        }
    }

    add_tick(c);
    uint32_t final_first = add_measure(c, Op::M, lat.data);
    std::vector<uint32_t> data_rec(lat.coord_of.size(), 0);
    for (size_t i = 0; i < lat.data.size(); i++) {
        data_rec[lat.data[i]] = final_first + (uint32_t)i;
    }
    for (size_t i = 0; i < lat.all_meas.size(); i++) {
        uint32_t m = lat.all_meas[i];
        if (lat.is_x_meas(m)) {
            continue;
        }
        std::vector<uint32_t> refs;
        for (auto delta : kZOrder) {
            int dq = lat.neighbor(m, delta);
            if (dq >= 0) {
                refs.push_back(data_rec[dq]);
            }
        }
        refs.push_back(prev[i]);
        add_detector(c, refs);
    }
    std::vector<uint32_t> obs;
    for (uint32_t q : lat.data) {
        if (lat.coord_of[q].second == 1) {
            obs.push_back(data_rec[q]);
        }
    }
    add_observable(c, 0, obs);
    return c;
}

CodeLayout surface_layout(uint32_t d) {
    SurfaceLattice lat(d);
    CodeLayout layout;
    layout.num_qubits = (uint32_t)lat.coord_of.size();
    layout.data_qubits = lat.data;
    layout.ancilla_qubits = lat.all_meas;
    layout.coords.resize(layout.num_qubits);
    for (uint32_t q = 0; q < layout.num_qubits; q++) {
        layout.coords[q] = {(double)lat.coord_of[q].first, (double)lat.coord_of[q].second};
    }
    for (uint32_t m : lat.all_meas) {
        Stabilizer s;
        s.is_x = lat.is_x_meas(m);
        for (auto delta : kXOrder) {
            int dq = lat.neighbor(m, delta);
            if (dq >= 0) {
                s.support.push_back((uint32_t)dq);
            }
        }
        std::sort(s.support.begin(), s.support.end());
        layout.stabilizers.push_back(std::move(s));
    }
    std::vector<uint32_t> logical;
    for (uint32_t q : lat.data) {
        if (lat.coord_of[q].second == 1) {
            logical.push_back(q);
        }
    }
    layout.logical_z.push_back(logical);
    return layout;
}

}  // namespace qecforge
