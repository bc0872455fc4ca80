#ifndef QECFORGE_ARCH_DEVICE_H
#define QECFORGE_ARCH_DEVICE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qecforge {

enum class LinkClass : uint8_t { local, inter_qpu, shuttle };

const char *link_class_name(LinkClass c);
LinkClass link_class_from_name(const std::string &name);

struct DeviceQubit {
    uint32_t id = 0;
    double x = 0, y = 0, z = 0;
    std::optional<double> t1_us;
    std::optional<double> t2_us;
};

struct DeviceEdge {
    uint32_t a = 0, b = 0;
    LinkClass link = LinkClass::local;
    double duration_us = 0;
    double error_scale = 1.0;
};

// Default error rates a preset carries (per-operation probabilities).
struct DeviceRates {
    double p_1q = 0;
    double p_2q = 0;
    double p_spam = 0;
    double p_idle = 0;
    double p_crosstalk = 0;
    double p_leakage = 0;
};

struct Device {
    std::string name;
    std::vector<DeviceQubit> qubits;
    std::vector<DeviceEdge> edges;
    std::string gateset = "stim_clifford";
    std::vector<uint32_t> qpu_of;  // empty, or one QPU id per qubit
    std::optional<DeviceRates> rates;

    size_t num_qubits() const {
        return qubits.size();
    }
    bool has_shuttling() const;
    // Neighbor lists indexed by qubit id.
    std::vector<std::vector<uint32_t>> adjacency(bool include_shuttle = true) const;
    bool is_connected() const;
    // Edge lookup ignoring endpoint order; nullptr when absent.
    const DeviceEdge *find_edge(uint32_t a, uint32_t b) const;
    double distance(uint32_t a, uint32_t b) const;  // euclidean on coordinates

    // Throws std::invalid_argument when ids are inconsistent, an edge
    // endpoint is out of range, or T2 > 2 T1 on some qubit.
    void validate() const;
};

enum class TopologyKind : uint8_t { line, grid, cuboid, heavy_hex, complete };
TopologyKind topology_kind_from_name(const std::string &name);

// dims: line/complete take 1 value, grid/heavy_hex 2, cuboid 3.
Device make_topology(TopologyKind kind, const std::vector<uint32_t> &dims);

// willow_x3, apollo_768, infleqtion_x16, flamingo, nighthawk.
Device device_preset(const std::string &name);

// Adds shuttle links between every non-adjacent pair with duration
// 2 * distance * pitch / max_speed (there and back). No-op when shuttle
// edges already exist.
Device add_shuttling(Device d, double pitch, double max_speed);

// Draws per-qubit T1 and T2 from normal(mean_t_us, stddev_us), floored at
// 1 us and clipped so T2 <= 2 T1. Same seed, same device.
Device sample_qubit_quality(Device d, double mean_t_us, double stddev_us, uint64_t seed);

std::string device_to_json(const Device &d);
Device device_from_json(const std::string &text);

}  // namespace qecforge

#endif
