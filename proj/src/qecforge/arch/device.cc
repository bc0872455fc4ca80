#include "qecforge/arch/device.h"

#include <cmath>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace qecforge {

const char *link_class_name(LinkClass c) {
    switch (c) {
        case LinkClass::local: return "local";
        case LinkClass::inter_qpu: return "inter_qpu";
        case LinkClass::shuttle: return "shuttle";
    }
    return "?";
}

LinkClass link_class_from_name(const std::string &name) {
    if (name == "local") return LinkClass::local;
    if (name == "inter_qpu") return LinkClass::inter_qpu;
    if (name == "shuttle") return LinkClass::shuttle;
    throw std::invalid_argument("unknown link class '" + name + "'");
}

bool Device::has_shuttling() const {
    for (const auto &e : edges) {
        if (e.link == LinkClass::shuttle) return true;
    }
    return false;
}

std::vector<std::vector<uint32_t>> Device::adjacency(bool include_shuttle) const {
    std::vector<std::vector<uint32_t>> adj(qubits.size());
    for (const auto &e : edges) {
        if (!include_shuttle && e.link == LinkClass::shuttle) continue;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    return adj;
}

bool Device::is_connected() const {
    if (qubits.empty()) return true;
    auto adj = adjacency(true);
    std::vector<char> seen(qubits.size(), 0);
    std::queue<uint32_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    size_t reached = 1;
    while (!frontier.empty()) {
        uint32_t q = frontier.front();
        frontier.pop();
        for (uint32_t nb : adj[q]) {
            if (!seen[nb]) {
                seen[nb] = 1;
                reached++;
                frontier.push(nb);
            }
        }
    }
    return reached == qubits.size();
}

const DeviceEdge *Device::find_edge(uint32_t a, uint32_t b) const {
    for (const auto &e : edges) {
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return &e;
    }
    return nullptr;
}

double Device::distance(uint32_t a, uint32_t b) const {
    const auto &qa = qubits.at(a);
    const auto &qb = qubits.at(b);
    double dx = qa.x - qb.x, dy = qa.y - qb.y, dz = qa.z - qb.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void Device::validate() const {
    for (size_t i = 0; i < qubits.size(); i++) {
        if (qubits[i].id != i) {
            throw std::invalid_argument("qubit ids must be dense and ordered");
        }
        if (qubits[i].t1_us && qubits[i].t2_us && *qubits[i].t2_us > 2.0 * *qubits[i].t1_us + 1e-9) {
            throw std::invalid_argument("qubit " + std::to_string(i) + " has T2 > 2 T1");
        }
    }
    for (const auto &e : edges) {
        if (e.a >= qubits.size() || e.b >= qubits.size() || e.a == e.b) {
            throw std::invalid_argument("edge endpoints out of range");
        }
    }
    if (!qpu_of.empty() && qpu_of.size() != qubits.size()) {
        throw std::invalid_argument("qpu partition size mismatch");
    }
}

std::string device_to_json(const Device &d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["gateset"] = d.gateset;
    auto &qs = j["qubits"] = nlohmann::json::array();
    for (const auto &q : d.qubits) {
        nlohmann::json jq{{"id", q.id}, {"x", q.x}, {"y", q.y}};
        if (q.z != 0) jq["z"] = q.z;
        if (q.t1_us) jq["t1"] = *q.t1_us;
        if (q.t2_us) jq["t2"] = *q.t2_us;
        qs.push_back(std::move(jq));
    }
    auto &es = j["edges"] = nlohmann::json::array();
    for (const auto &e : d.edges) {
        es.push_back({{"a", e.a},
                      {"b", e.b},
                      {"class", link_class_name(e.link)},
                      {"duration", e.duration_us},
                      {"error_scale", e.error_scale}});
    }
    if (!d.qpu_of.empty()) j["qpus"] = d.qpu_of;
    if (d.rates) {
        j["rates"] = {{"p_1q", d.rates->p_1q},       {"p_2q", d.rates->p_2q},
                      {"p_spam", d.rates->p_spam},   {"p_idle", d.rates->p_idle},
                      {"p_crosstalk", d.rates->p_crosstalk}, {"p_leakage", d.rates->p_leakage}};
    }
    return j.dump(2);
}

Device device_from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Device d;
    d.name = j.value("name", "");
    d.gateset = j.value("gateset", "stim_clifford");
    for (const auto &jq : j.at("qubits")) {
        DeviceQubit q;
        q.id = jq.at("id").get<uint32_t>();
        q.x = jq.value("x", 0.0);
        q.y = jq.value("y", 0.0);
        q.z = jq.value("z", 0.0);
        if (jq.contains("t1")) q.t1_us = jq["t1"].get<double>();
        if (jq.contains("t2")) q.t2_us = jq["t2"].get<double>();
        d.qubits.push_back(q);
    }
    for (const auto &je : j.at("edges")) {
        DeviceEdge e;
        e.a = je.at("a").get<uint32_t>();
        e.b = je.at("b").get<uint32_t>();
        e.link = link_class_from_name(je.value("class", "local"));
        e.duration_us = je.value("duration", 0.0);
        e.error_scale = je.value("error_scale", 1.0);
        d.edges.push_back(e);
    }
    if (j.contains("qpus")) d.qpu_of = j["qpus"].get<std::vector<uint32_t>>();
    if (j.contains("rates")) {
        DeviceRates r;
        const auto &jr = j["rates"];
        r.p_1q = jr.value("p_1q", 0.0);
        r.p_2q = jr.value("p_2q", 0.0);
        r.p_spam = jr.value("p_spam", 0.0);
        r.p_idle = jr.value("p_idle", 0.0);
        r.p_crosstalk = jr.value("p_crosstalk", 0.0);
        r.p_leakage = jr.value("p_leakage", 0.0);
        d.rates = r;
    }
    d.validate();
    return d;
}

}  // namespace qecforge
