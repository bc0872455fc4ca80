#include <stdexcept>

#include "json.hpp"
#include "qecforge/bench/bench.h"

namespace qecforge {

using nlohmann::json;

const char *decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::mwpm: return "mwpm";
        case DecoderKind::bposd: return "bposd";
    }
    throw std::logic_error("bad decoder kind");
}

DecoderKind decoder_from_name(const std::string &name) {
    if (name == "mwpm") return DecoderKind::mwpm;
    if (name == "bposd") return DecoderKind::bposd;
    throw std::invalid_argument("unknown decoder '" + name + "'");
}

const char *pipeline_name(PipelineKind k) {
    switch (k) {
        case PipelineKind::memory: return "memory";
        case PipelineKind::idle_gadget: return "idle-gadget";
        case PipelineKind::unprotected_idle: return "unprotected-idle";
    }
    throw std::logic_error("bad pipeline kind");
}

PipelineKind pipeline_from_name(const std::string &name) {
    if (name == "memory") return PipelineKind::memory;
    if (name == "idle-gadget") return PipelineKind::idle_gadget;
    if (name == "unprotected-idle") return PipelineKind::unprotected_idle;
    throw std::invalid_argument("unknown pipeline '" + name + "'");
}

NoiseModel NoiseSpec::build(const Device &d) const {
    NoiseModel m;
    switch (kind) {
        case NoiseKind::uniform: m = uniform_noise(p); break;
        case NoiseKind::si1000_modified: m = si1000(p); break;
        case NoiseKind::device: m = device_noise(d); break;
    }
    m.inter_qpu_scale = inter_qpu_scale;
    return m;
}

Device build_device(const ExperimentConfig &cfg) {
    Device d;
    size_t colon = cfg.device.find(':');
    std::string head = colon == std::string::npos ? cfg.device : cfg.device.substr(0, colon);
    bool is_topology = head == "line" || head == "grid" || head == "cuboid" ||
                       head == "heavy_hex" || head == "complete";
    if (is_topology) {
        if (colon == std::string::npos) {
            throw std::invalid_argument("topology device needs dims, e.g. '" + head + ":5x5'");
        }
        std::vector<uint32_t> dims;
        std::string rest = cfg.device.substr(colon + 1);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t next = rest.find('x', pos);
            std::string tok = rest.substr(pos, next == std::string::npos ? next : next - pos);
            if (tok.empty()) throw std::invalid_argument("bad dims in '" + cfg.device + "'");
            dims.push_back(static_cast<uint32_t>(std::stoul(tok)));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        d = make_topology(topology_kind_from_name(head), dims);
    } else {
        d = device_preset(cfg.device);
    }
    if (cfg.quality.enabled()) {
        d = sample_qubit_quality(d, cfg.quality.mean_t_us, cfg.quality.stddev_us,
                                 cfg.quality.seed);
    }
    if (cfg.shuttling) {
        d = add_shuttling(d, cfg.shuttle_pitch_um, cfg.shuttle_speed_um_per_us);
    }
    return d;
}

void ExperimentConfig::validate() const {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (osd_order > 16) throw std::invalid_argument("osd_order capped at 16");
    if (noise.p < 0 || noise.p > 1) throw std::invalid_argument("noise p outside [0, 1]");
    if (noise.inter_qpu_scale < 0) throw std::invalid_argument("inter_qpu_scale negative");
    if (pipeline == PipelineKind::memory) code.validate();
    if (!decoder_variant.empty()) bposd_variant_from_name(decoder_variant);
    build_device(*this);  // referenced presets must exist
}

BposdVariant ExperimentConfig::resolved_variant() const {
    if (!decoder_variant.empty()) return bposd_variant_from_name(decoder_variant);
    if (code.family == CodeFamily::bacon_shor || code.family == CodeFamily::steane_concat) {
        return BposdVariant::parity_check;
    }
    return BposdVariant::batch;
}

namespace {

json code_to_json(const CodeSpec &c) {
    json a = json::array(), b = json::array();
    for (auto &[i, j] : c.bb_a) a.push_back({i, j});
    for (auto &[i, j] : c.bb_b) b.push_back({i, j});
    return json{{"family", code_family_name(c.family)}, {"distance", c.distance},
                {"rounds", c.rounds},                   {"m1", c.m1},
                {"m2", c.m2},                           {"bb_l", c.bb_l},
                {"bb_m", c.bb_m},                       {"bb_a", a},
                {"bb_b", b}};
}

CodeSpec code_from_json(const json &j) {
    CodeSpec c;
    if (j.contains("family")) c.family = code_family_from_name(j["family"]);
    c.distance = j.value("distance", c.distance);
    c.rounds = j.value("rounds", c.rounds);
    c.m1 = j.value("m1", c.m1);
    c.m2 = j.value("m2", c.m2);
    c.bb_l = j.value("bb_l", c.bb_l);
    c.bb_m = j.value("bb_m", c.bb_m);
    auto pairs = [](const json &arr) {
        std::vector<std::pair<uint32_t, uint32_t>> out;
        for (auto &t : arr) out.emplace_back(t.at(0), t.at(1));
        return out;
    };
    if (j.contains("bb_a")) c.bb_a = pairs(j["bb_a"]);
    if (j.contains("bb_b")) c.bb_b = pairs(j["bb_b"]);
    return c;
}

}  // namespace

std::string config_to_json(const ExperimentConfig &cfg) {
    // threads is an execution knob, not part of the experiment identity:
    // result rows must not depend on it.
    json j{{"name", cfg.name},
           {"pipeline", pipeline_name(cfg.pipeline)},
           {"code", code_to_json(cfg.code)},
           {"device", cfg.device},
           {"shuttling", cfg.shuttling},
           {"shuttle_pitch_um", cfg.shuttle_pitch_um},
           {"shuttle_speed_um_per_us", cfg.shuttle_speed_um_per_us},
           {"quality",
            {{"mean_t_us", cfg.quality.mean_t_us},
             {"stddev_us", cfg.quality.stddev_us},
             {"seed", cfg.quality.seed}}},
           {"layout", layout_strategy_name(cfg.layout)},
           {"routing", routing_strategy_name(cfg.routing)},
           {"gateset", gateset_name(cfg.gateset)},
           {"optimize", cfg.optimize},
           {"noise",
            {{"kind", noise_kind_name(cfg.noise.kind)},
             {"p", cfg.noise.p},
             {"inter_qpu_scale", cfg.noise.inter_qpu_scale}}},
           {"decoder", decoder_name(cfg.decoder)},
           {"decoder_variant", cfg.decoder_variant},
           {"osd_order", cfg.osd_order},
           {"shots", cfg.shots},
           {"repetitions", cfg.repetitions},
           {"seed", cfg.seed}};
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string &text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.name = j.value("name", "");
    if (j.contains("pipeline")) cfg.pipeline = pipeline_from_name(j["pipeline"]);
    if (j.contains("code")) cfg.code = code_from_json(j["code"]);
    cfg.device = j.value("device", cfg.device);
    cfg.shuttling = j.value("shuttling", cfg.shuttling);
    cfg.shuttle_pitch_um = j.value("shuttle_pitch_um", cfg.shuttle_pitch_um);
    cfg.shuttle_speed_um_per_us = j.value("shuttle_speed_um_per_us", cfg.shuttle_speed_um_per_us);
    if (j.contains("quality")) {
        const json &q = j["quality"];
        cfg.quality.mean_t_us = q.value("mean_t_us", 0.0);
        cfg.quality.stddev_us = q.value("stddev_us", 0.0);
        cfg.quality.seed = q.value("seed", uint64_t{0});
    }
    if (j.contains("layout")) cfg.layout = layout_strategy_from_name(j["layout"]);
    if (j.contains("routing")) cfg.routing = routing_strategy_from_name(j["routing"]);
    if (j.contains("gateset")) cfg.gateset = gateset_from_name(j["gateset"]);
    cfg.optimize = j.value("optimize", cfg.optimize);
    if (j.contains("noise")) {
        const json &n = j["noise"];
        if (n.contains("kind")) cfg.noise.kind = noise_kind_from_name(n["kind"]);
        cfg.noise.p = n.value("p", cfg.noise.p);
        cfg.noise.inter_qpu_scale = n.value("inter_qpu_scale", cfg.noise.inter_qpu_scale);
    }
    if (j.contains("decoder")) cfg.decoder = decoder_from_name(j["decoder"]);
    cfg.decoder_variant = j.value("decoder_variant", cfg.decoder_variant);
    cfg.osd_order = j.value("osd_order", cfg.osd_order);
    cfg.shots = j.value("shots", cfg.shots);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

uint64_t fnv1a64(const std::string &bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t config_hash(const ExperimentConfig &cfg) {
    return fnv1a64(config_to_json(cfg));
}

std::vector<ExperimentConfig> load_config_file(const std::string &text) {
    json j = json::parse(text);
    std::vector<ExperimentConfig> out;
    if (j.contains("experiments")) {
        json defaults = j.value("defaults", json::object());
        for (const json &exp : j["experiments"]) {
            json merged = defaults;
            merged.merge_patch(exp);
            out.push_back(config_from_json(merged.dump()));
        }
    } else {
        out.push_back(config_from_json(text));
    }
    for (auto &cfg : out) cfg.validate();
    return out;
}

}  // namespace qecforge
