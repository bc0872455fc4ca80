#include <cinttypes>
#include <cstdio>

#include "json.hpp"
#include "qecforge/bench/bench.h"

namespace qecforge {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

std::string fmt_hash(uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

constexpr const char *kCsvHeader =
    "name,pipeline,family,distance,rounds,device,shuttling,quality_mean_us,layout,routing,"
    "gateset,optimize,noise,noise_p,inter_qpu_scale,decoder,variant,osd_order,shots,"
    "repetitions,seed,config_hash,failures,ler,ler_stderr,swaps_inserted,pct_2q_overhead,"
    "gates_added_per_original";

}  // namespace

std::string results_to_csv(const std::vector<ExperimentResult> &results) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ExperimentResult &r : results) {
        const ExperimentConfig &c = r.cfg;
        std::string variant =
            c.decoder == DecoderKind::bposd ? bposd_variant_name(c.resolved_variant()) : "";
        out += csv_escape(c.name);
        out += ',';
        out += pipeline_name(c.pipeline);
        out += ',';
        out += code_family_name(c.code.family);
        out += ',';
        out += std::to_string(c.code.distance);
        out += ',';
        out += std::to_string(c.code.rounds_or_default());
        out += ',';
        out += csv_escape(c.device);
        out += ',';
        out += c.shuttling ? "1" : "0";
        out += ',';
        out += fmt_double(c.quality.mean_t_us);
        out += ',';
        out += layout_strategy_name(c.layout);
        out += ',';
        out += routing_strategy_name(c.routing);
        out += ',';
        out += gateset_name(c.gateset);
        out += ',';
        out += c.optimize ? "1" : "0";
        out += ',';
        out += noise_kind_name(c.noise.kind);
        out += ',';
        out += fmt_double(c.noise.p);
        out += ',';
        out += fmt_double(c.noise.inter_qpu_scale);
        out += ',';
        out += decoder_name(c.decoder);
        out += ',';
        out += variant;
        out += ',';
        out += std::to_string(c.osd_order);
        out += ',';
        out += std::to_string(r.shots);
        out += ',';
        out += std::to_string(c.repetitions);
        out += ',';
        out += std::to_string(c.seed);
        out += ',';
        out += fmt_hash(r.config_hash);
        out += ',';
        out += std::to_string(r.failures);
        out += ',';
        out += fmt_double(r.ler.rate);
        out += ',';
        out += fmt_double(r.ler.stderr_);
        out += ',';
        out += fmt_double(r.swaps_inserted);
        out += ',';
        out += fmt_double(r.pct_2q_overhead);
        out += ',';
        out += fmt_double(r.gates_added_per_original);
        out += '\n';
    }
    return out;
}

std::string results_to_json(const std::vector<ExperimentResult> &results) {
    nlohmann::json doc;
    doc["tool"] = kToolVersion;
    doc["results"] = nlohmann::json::array();
    for (const ExperimentResult &r : results) {
        nlohmann::json entry;
        entry["config"] = nlohmann::json::parse(config_to_json(r.cfg));
        entry["config_hash"] = fmt_hash(r.config_hash);
        entry["metrics"] = {{"ler", r.ler.rate},
                            {"ler_stderr", r.ler.stderr_},
                            {"failures", r.failures},
                            {"shots", r.shots},
                            {"swaps_inserted", r.swaps_inserted},
                            {"pct_2q_overhead", r.pct_2q_overhead},
                            {"gates_added_per_original", r.gates_added_per_original}};
        entry["timing"] = {{"wall_ms", r.wall_ms}};
        doc["results"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

}  // namespace qecforge
