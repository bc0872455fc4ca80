#ifndef QECFORGE_BENCH_BENCH_H
#define QECFORGE_BENCH_BENCH_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qecforge/arch/device.h"
#include "qecforge/codes/codes.h"
#include "qecforge/decode/decode.h"
#include "qecforge/noise/noise.h"
#include "qecforge/transpile/transpile.h"

namespace qecforge {

constexpr const char *kToolVersion = "qecforge 0.1.0";

enum class DecoderKind : uint8_t { mwpm, bposd };
const char *decoder_name(DecoderKind k);
DecoderKind decoder_from_name(const std::string &name);

// What the run measures. memory runs the full pipeline on an encoded-memory
// circuit; the idle variants build the fixed one-qubit comparison circuits
// and skip transpilation and decoding.
enum class PipelineKind : uint8_t { memory, idle_gadget, unprotected_idle };
const char *pipeline_name(PipelineKind k);
PipelineKind pipeline_from_name(const std::string &name);

// Optional per-qubit coherence sampling applied to the device (normal
// around mean_t_us, clipped to T2 <= 2 T1).
struct QualitySpec {
    double mean_t_us = 0;
    double stddev_us = 0;
    uint64_t seed = 0;
    bool enabled() const {
        return mean_t_us > 0;
    }
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::uniform;
    double p = 0;
    double inter_qpu_scale = 1.0;

    // Resolved against the device (device kind reads the preset rates).
    NoiseModel build(const Device &d) const;
};

struct ExperimentConfig {
    std::string name;
    PipelineKind pipeline = PipelineKind::memory;
    CodeSpec code;
    // "complete:25", "grid:5x5", "cuboid:2x2x4", "heavy_hex:3x3", "line:9",
    // or a device preset name (willow_x3, apollo_768, ...).
    std::string device = "complete:25";
    bool shuttling = false;
    double shuttle_pitch_um = 50.0;
    double shuttle_speed_um_per_us = 100.0;
    QualitySpec quality;
    LayoutStrategy layout = LayoutStrategy::trivial;
    RoutingStrategy routing = RoutingStrategy::sabre;
    GateSetId gateset = GateSetId::stim_clifford;
    bool optimize = false;
    NoiseSpec noise;
    DecoderKind decoder = DecoderKind::bposd;
    // Empty string picks the per-family default: parity-check for
    // Bacon-Shor and concatenated Steane, batch otherwise.
    std::string decoder_variant;
    uint32_t osd_order = 0;
    uint64_t shots = 100000;
    uint32_t repetitions = 1;
    uint64_t seed = 1;
    int threads = 0;  // 0 defers to QECFORGE_THREADS, then hardware

    void validate() const;  // throws std::invalid_argument
    BposdVariant resolved_variant() const;
};

Device build_device(const ExperimentConfig &cfg);

// Canonical JSON (sorted keys, stable number formatting) and its FNV-1a
// hash; equal configs hash equally across runs and platforms.
std::string config_to_json(const ExperimentConfig &cfg);
ExperimentConfig config_from_json(const std::string &text);
uint64_t config_hash(const ExperimentConfig &cfg);

// A config file is one config object, or {"defaults": {...},
// "experiments": [{...}, ...]} where each experiment overrides defaults.
std::vector<ExperimentConfig> load_config_file(const std::string &text);

struct ExperimentResult {
    ExperimentConfig cfg;
    RateEstimate ler;
    uint64_t failures = 0;
    uint64_t shots = 0;
    double swaps_inserted = 0;  // mean over repetitions
    double pct_2q_overhead = 0;
    double gates_added_per_original = 0;
    double wall_ms = 0;  // excluded from result rows
    uint64_t config_hash = 0;
    std::string tool_version = kToolVersion;
};

// generate -> translate -> layout/route -> translate -> noise -> DEM ->
// sample -> decode -> rate. Each repetition reruns everything after
// generation with its own derived seed; shots are split across
// repetitions. Errors carry the failing stage in the message.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

// All configs of a sweep, in input order. Runs configs concurrently when
// threads allow; each row is independent of scheduling.
std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig> &cfgs,
                                        int threads = 0);

// First-order cost of protecting one idle qubit with the distance-3
// repetition gadget (two encoding gates, one extraction round): five idle
// slots, six two-qubit gates, two ancilla readouts. Clamped to [0, 1].
double estimate_repetition_overhead(double p_idle, double p_gate, double p_meas);

// The gadget circuits behind the estimate. Noise is baked in: every
// two-qubit gate takes DEPOLARIZE2(p_gate), idle data slots DEPOLARIZE1
// (p_idle), ancilla readouts X_ERROR(p_meas). The unprotected circuit is
// one qubit idling for the same five time steps.
Circuit repetition_idle_gadget(double p_idle, double p_gate, double p_meas);
Circuit unprotected_idle_circuit(double p_idle);

// Fraction of shots where any symptom shows up (detector fired or readout
// parity flipped) for the protected gadget; plain readout-flip fraction
// for the unprotected circuit.
RateEstimate gadget_error_rate(const Circuit &c, uint64_t shots, uint64_t seed,
                               int threads = 0);

// One CSV row per result, stable schema and formatting, no timing fields:
// rerunning the same config with the same seeds reproduces rows byte for
// byte regardless of thread count.
std::string results_to_csv(const std::vector<ExperimentResult> &results);
// Full provenance document; wall_ms is the only field expected to change
// between reruns.
std::string results_to_json(const std::vector<ExperimentResult> &results);

uint64_t fnv1a64(const std::string &bytes);

}  // namespace qecforge

#endif
