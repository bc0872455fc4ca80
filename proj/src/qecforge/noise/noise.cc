#include "qecforge/noise/noise.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace qecforge {

const char *noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::uniform: return "uniform";
        case NoiseKind::si1000_modified: return "si1000_modified";
        case NoiseKind::device: return "device";
    }
    return "?";
}

NoiseKind noise_kind_from_name(const std::string &name) {
    if (name == "uniform") return NoiseKind::uniform;
    if (name == "si1000_modified" || name == "si1000") return NoiseKind::si1000_modified;
    if (name == "device") return NoiseKind::device;
    throw std::invalid_argument("unknown noise kind '" + name + "'");
}

void NoiseModel::validate() const {
    auto check = [](double p, const char *what) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string("noise rate ") + what + " outside [0,1]");
        }
    };
    check(rates.p_1q, "p_1q");
    check(rates.p_2q, "p_2q");
    check(rates.p_meas_flip, "p_meas_flip");
    check(rates.p_reset, "p_reset");
    check(rates.p_idle, "p_idle");
    check(rates.p_idle_meas_window, "p_idle_meas_window");
    check(rates.p_crosstalk, "p_crosstalk");
    check(rates.p_leakage, "p_leakage");
    for (const auto &[name, dur] : durations_us) {
        if (dur <= 0) throw std::invalid_argument("duration for " + name + " must be positive");
    }
    if (tick_duration_us <= 0) throw std::invalid_argument("tick duration must be positive");
    if (inter_qpu_scale < 0) throw std::invalid_argument("inter_qpu scale must be nonnegative");
}

NoiseModel uniform_noise(double p) {
    NoiseModel m;
    m.kind = NoiseKind::uniform;
    m.base_p = p;
    m.rates.p_1q = p;
    m.rates.p_2q = p;
    m.rates.p_meas_flip = p;
    m.rates.p_reset = p;
    m.rates.p_idle = p;
    m.rates.p_idle_meas_window = p;
    m.validate();
    return m;
}

NoiseModel si1000(double p) {
    if (!(p >= 0.0 && p <= 0.1)) {
        throw std::invalid_argument("si1000 expects p in [0, 0.1]");
    }
    NoiseModel m;
    m.kind = NoiseKind::si1000_modified;
    m.base_p = p;
    m.rates.p_2q = p;
    m.rates.p_1q = p / 10;
    m.rates.p_meas_flip = 5 * p;
    m.rates.p_reset = 2 * p;
    m.rates.p_idle = p / 10;
    m.rates.p_idle_meas_window = 2 * p;
    m.validate();
    return m;
}

NoiseModel device_noise(const Device &d) {
    if (!d.rates) {
        throw std::invalid_argument("device '" + d.name + "' carries no default rates");
    }
    NoiseModel m;
    m.kind = NoiseKind::device;
    m.base_p = d.rates->p_2q;
    m.rates.p_1q = d.rates->p_1q;
    m.rates.p_2q = d.rates->p_2q;
    m.rates.p_meas_flip = d.rates->p_spam;
    m.rates.p_reset = d.rates->p_spam;
    m.rates.p_idle = d.rates->p_idle;
    m.rates.p_idle_meas_window = d.rates->p_idle;
    m.rates.p_crosstalk = d.rates->p_crosstalk;
    m.rates.p_leakage = d.rates->p_leakage;
    if (d.name == "apollo_768") {
        // Trapped-ion path: shuttling costs a flat hit, not a geometry law.
        m.shuttle.use_fixed_rate = true;
        m.shuttle.fixed_p = d.rates->p_idle;
    }
    m.validate();
    return m;
}

PauliProbs twirl_idle(double dt, double t1, double t2) {
    if (t1 <= 0 || t2 <= 0) throw std::invalid_argument("coherence times must be positive");
    if (t2 > 2.0 * t1 + 1e-12) throw std::invalid_argument("T2 exceeds 2*T1");
    if (dt < 0) throw std::invalid_argument("dt must be nonnegative");
    double e1 = std::exp(-dt / t1);
    double e2 = std::exp(-dt / t2);
    PauliProbs p;
    p.p_x = (1.0 - e1) / 4.0;
    p.p_y = p.p_x;
    p.p_z = (1.0 + e1 - 2.0 * e2) / 4.0;
    // Guard against -0 and tiny negatives from cancellation.
    p.p_z = std::max(p.p_z, 0.0);
    return p;
}

PauliProbs shuttle_error(double distance, double pitch, double max_speed, double t1, double t2) {
    if (pitch <= 0 || max_speed <= 0 || distance < 0) {
        throw std::invalid_argument("bad shuttle geometry");
    }
    return twirl_idle(2.0 * distance * pitch / max_speed, t1, t2);
}

namespace {

struct NoiseCtx {
    const NoiseModel &m;
    const Device *dev;
    std::vector<std::vector<uint32_t>> adj;  // local+inter edges only
    Circuit out;

    void emit1(Op op, const std::vector<uint32_t> &qs, std::vector<double> params) {
        if (qs.empty()) return;
        std::vector<Target> ts;
        ts.reserve(qs.size());
        for (uint32_t q : qs) ts.push_back(Target::qubit(q));
        out.append(op, std::move(ts), std::move(params));
    }

    void pauli_channel(uint32_t q, const PauliProbs &p) {
        if (p.sum() <= 0) return;
        out.append(Op::PAULI_CHANNEL_1, {Target::qubit(q)}, {p.p_x, p.p_y, p.p_z});
    }
};

double edge_scale(const NoiseCtx &ctx, uint32_t a, uint32_t b) {
    if (!ctx.dev) return 1.0;
    const DeviceEdge *e = ctx.dev->find_edge(a, b);
    if (!e) {
        throw std::invalid_argument("two-qubit gate on " + std::to_string(a) + "," +
                                    std::to_string(b) + " is not a device edge");
    }
    double s = e->error_scale;
    if (e->link == LinkClass::inter_qpu) s *= ctx.m.inter_qpu_scale;
    return s;
}

void shuttle_channels(NoiseCtx &ctx, uint32_t a, uint32_t b) {
    if (!ctx.dev) return;
    const DeviceEdge *e = ctx.dev->find_edge(a, b);
    if (!e || e->link != LinkClass::shuttle) return;
    if (ctx.m.shuttle.use_fixed_rate) {
        if (ctx.m.shuttle.fixed_p > 0) {
            ctx.emit1(Op::DEPOLARIZE1, {a, b}, {ctx.m.shuttle.fixed_p});
        }
        return;
    }
    for (uint32_t q : {a, b}) {
        const auto &dq = ctx.dev->qubits[q];
        double t1 = dq.t1_us.value_or(ctx.m.shuttle.t1_us);
        double t2 = dq.t2_us.value_or(ctx.m.shuttle.t2_us);
        if (t1 <= 0 || t2 <= 0) continue;  // no coherence info, channel off
        ctx.pauli_channel(q, twirl_idle(e->duration_us, t1, t2));
    }
}

void crosstalk_channels(NoiseCtx &ctx, uint32_t a, uint32_t b) {
    if (ctx.m.rates.p_crosstalk <= 0 || ctx.adj.empty()) return;
    std::set<uint32_t> nbrs;
    for (uint32_t q : {a, b}) {
        for (uint32_t nb : ctx.adj[q]) nbrs.insert(nb);
    }
    nbrs.erase(a);
    nbrs.erase(b);
    ctx.emit1(Op::DEPOLARIZE1, {nbrs.begin(), nbrs.end()}, {ctx.m.rates.p_crosstalk});
}

void leakage_channels(NoiseCtx &ctx, const Instruction &inst, bool two_qubit) {
    double p = ctx.m.rates.p_leakage;
    if (p <= 0) return;
    std::vector<uint32_t> hit;
    if (!two_qubit) {
        for (const auto &t : inst.targets) hit.push_back(t.value);
    } else {
        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
            hit.push_back(inst.targets[i].value);
            // A leaked qubit disturbs whatever it interacts with next.
            if (ctx.m.leak_propagate_to_partner) hit.push_back(inst.targets[i + 1].value);
        }
    }
    ctx.emit1(Op::X_ERROR, hit, {p});
}

// Idle channels for one tick window: every active qubit the window never
// touched decoheres while it waits.
void flush_idle(NoiseCtx &ctx, const std::set<uint32_t> &active, const std::set<uint32_t> &touched,
                bool had_quantum_op, bool had_meas_or_reset, double window_dt) {
    if (!had_quantum_op) return;
    std::vector<uint32_t> idle;
    for (uint32_t q : active) {
        if (!touched.count(q)) idle.push_back(q);
    }
    if (idle.empty()) return;
    bool twirled = ctx.m.kind == NoiseKind::device && ctx.dev;
    std::vector<uint32_t> flat;
    for (uint32_t q : idle) {
        if (twirled && ctx.dev->qubits[q].t1_us && ctx.dev->qubits[q].t2_us) {
            ctx.pauli_channel(q, twirl_idle(window_dt, *ctx.dev->qubits[q].t1_us,
                                            *ctx.dev->qubits[q].t2_us));
        } else {
            flat.push_back(q);
        }
    }
    double p = had_meas_or_reset ? ctx.m.rates.p_idle_meas_window : ctx.m.rates.p_idle;
    if (p > 0) ctx.emit1(Op::DEPOLARIZE1, flat, {p});
}

}  // namespace

Circuit apply_noise(const Circuit &c, const NoiseModel &m, const Device *d, const TrackerLog *t) {
    m.validate();
    if (d) {
        d->validate();
        if (c.num_qubits > d->num_qubits()) {
            throw std::invalid_argument("circuit uses more qubits than the device has");
        }
    }
    if (t) {
        for (uint32_t phys : t->initial_mapping) {
            if (d && phys >= d->num_qubits()) {
                throw std::invalid_argument("tracker maps onto a qubit the device lacks");
            }
        }
        for (const auto &s : t->swaps) {
            if (s.instruction_index >= c.instructions.size()) {
                throw std::invalid_argument("tracker swap index beyond circuit end");
            }
        }
    }

    NoiseCtx ctx{m, d, {}, {}};
    if (d) ctx.adj = d->adjacency(false);

    std::set<uint32_t> active;
    for (const auto &inst : c.instructions) {
        if (op_is_noise(inst.op)) {
            throw std::invalid_argument("input circuit already contains noise channels");
        }
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::gate1 || k == OpKind::gate2 || k == OpKind::measure ||
            k == OpKind::measure_reset || k == OpKind::reset) {
            for (const auto &tg : inst.targets) active.insert(tg.value);
        }
    }

    std::set<uint32_t> touched;
    bool had_quantum_op = false, had_meas_or_reset = false;
    double window_dt = 0;

    auto close_window = [&]() {
        flush_idle(ctx, active, touched, had_quantum_op, had_meas_or_reset,
                   window_dt > 0 ? window_dt : m.tick_duration_us);
        touched.clear();
        had_quantum_op = false;
        had_meas_or_reset = false;
        window_dt = 0;
    };

    for (const auto &inst : c.instructions) {
        OpKind k = op_info(inst.op).kind;
        if (k == OpKind::tick) {
            close_window();
            ctx.out.append(inst);
            continue;
        }
        if (k == OpKind::detector || k == OpKind::observable) {
            ctx.out.append(inst);
            continue;
        }

        had_quantum_op = true;
        for (const auto &tg : inst.targets) touched.insert(tg.value);
        auto it = m.durations_us.find(op_info(inst.op).name);
        if (it != m.durations_us.end()) window_dt = std::max(window_dt, it->second);

        if (k == OpKind::measure || k == OpKind::measure_reset) {
            had_meas_or_reset = true;
            if (m.rates.p_meas_flip > 0) {
                ctx.out.append(Op::X_ERROR, inst.targets, {m.rates.p_meas_flip});
            }
            ctx.out.append(inst);
            if (k == OpKind::measure_reset && m.rates.p_reset > 0) {
                ctx.out.append(Op::X_ERROR, inst.targets, {m.rates.p_reset});
            }
            continue;
        }
        if (k == OpKind::reset) {
            had_meas_or_reset = true;
            ctx.out.append(inst);
            if (m.rates.p_reset > 0) {
                ctx.out.append(Op::X_ERROR, inst.targets, {m.rates.p_reset});
            }
            continue;
        }
        if (k == OpKind::gate1) {
            ctx.out.append(inst);
            if (m.rates.p_1q > 0) {
                ctx.out.append(Op::DEPOLARIZE1, inst.targets, {m.rates.p_1q});
            }
            leakage_channels(ctx, inst, false);
            continue;
        }
        // Two-qubit gate: per pair, depolarize at the link-scaled rate, then
        // shuttle decoherence, crosstalk on graph neighbors, and leakage.
        ctx.out.append(inst);
        for (size_t i = 0; i + 1 < inst.targets.size(); i += 2) {
            uint32_t a = inst.targets[i].value;
            uint32_t b = inst.targets[i + 1].value;
            double p2 = m.rates.p_2q * edge_scale(ctx, a, b);
            if (p2 > 0) {
                ctx.out.append(Op::DEPOLARIZE2, {Target::qubit(a), Target::qubit(b)},
                               {std::min(p2, 1.0)});
            }
            shuttle_channels(ctx, a, b);
            crosstalk_channels(ctx, a, b);
        }
        leakage_channels(ctx, inst, true);
    }
    close_window();
    return ctx.out;
}

std::string noise_to_json(const NoiseModel &m) {
    nlohmann::json j;
    j["kind"] = noise_kind_name(m.kind);
    j["p"] = m.base_p;
    j["rates"] = {{"p_1q", m.rates.p_1q},
                  {"p_2q", m.rates.p_2q},
                  {"p_meas_flip", m.rates.p_meas_flip},
                  {"p_reset", m.rates.p_reset},
                  {"p_idle", m.rates.p_idle},
                  {"p_idle_meas_window", m.rates.p_idle_meas_window},
                  {"p_crosstalk", m.rates.p_crosstalk},
                  {"p_leakage", m.rates.p_leakage}};
    auto &jd = j["durations"] = nlohmann::json::object();
    for (const auto &[gate, us] : m.durations_us) jd[gate] = us * 1000.0;  // stored in ns
    j["scales"] = {{"inter_qpu", m.inter_qpu_scale}};
    j["tick_duration_ns"] = m.tick_duration_us * 1000.0;
    j["leak_propagate_to_partner"] = m.leak_propagate_to_partner;
    if (m.shuttle.use_fixed_rate || m.shuttle.t1_us > 0) {
        j["shuttle"] = {{"use_fixed_rate", m.shuttle.use_fixed_rate},
                        {"fixed_p", m.shuttle.fixed_p},
                        {"t1_us", m.shuttle.t1_us},
                        {"t2_us", m.shuttle.t2_us}};
    }
    return j.dump(2);
}

NoiseModel noise_from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NoiseModel m;
    m.kind = noise_kind_from_name(j.value("kind", "uniform"));
    m.base_p = j.value("p", 0.0);
    if (j.contains("rates")) {
        const auto &jr = j["rates"];
        m.rates.p_1q = jr.value("p_1q", 0.0);
        m.rates.p_2q = jr.value("p_2q", 0.0);
        m.rates.p_meas_flip = jr.value("p_meas_flip", 0.0);
        m.rates.p_reset = jr.value("p_reset", 0.0);
        m.rates.p_idle = jr.value("p_idle", 0.0);
        m.rates.p_idle_meas_window = jr.value("p_idle_meas_window", m.rates.p_idle);
        m.rates.p_crosstalk = jr.value("p_crosstalk", 0.0);
        m.rates.p_leakage = jr.value("p_leakage", 0.0);
    }
    if (j.contains("durations")) {
        for (const auto &[gate, ns] : j["durations"].items()) {
            m.durations_us[gate] = ns.get<double>() / 1000.0;
        }
    }
    if (j.contains("scales")) m.inter_qpu_scale = j["scales"].value("inter_qpu", 1.0);
    if (j.contains("tick_duration_ns")) m.tick_duration_us = j["tick_duration_ns"].get<double>() / 1000.0;
    m.leak_propagate_to_partner = j.value("leak_propagate_to_partner", true);
    if (j.contains("shuttle")) {
        const auto &js = j["shuttle"];
        m.shuttle.use_fixed_rate = js.value("use_fixed_rate", false);
        m.shuttle.fixed_p = js.value("fixed_p", 0.0);
        m.shuttle.t1_us = js.value("t1_us", 0.0);
        m.shuttle.t2_us = js.value("t2_us", 0.0);
    }
    m.validate();
    return m;
}

}  // namespace qecforge
