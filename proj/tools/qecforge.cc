// Command-line front end: each subcommand is one pipeline stage, plus
// `run` for whole declarative sweeps. File formats are the library's text
// and b8 formats throughout, so stages compose via the filesystem.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qecforge/bench/bench.h"
#include "qecforge/sim/frame.h"

using namespace qecforge;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

// Accepts a JSON file path, a preset name, or a topology string like
// "grid:5x5".
Device load_device(const std::string &arg) {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
        return device_from_json(slurp(arg));
    }
    ExperimentConfig probe;
    probe.device = arg;
    return build_device(probe);
}

int cmd_generate(const std::string &family, uint32_t distance, uint32_t rounds, uint32_t m1,
                 uint32_t m2, const std::string &out) {
    CodeSpec spec;
    spec.family = code_family_from_name(family);
    spec.distance = distance;
    spec.rounds = rounds;
    spec.m1 = m1;
    spec.m2 = m2;
    spec.validate();
    spit(out, emit_circuit(generate_memory(spec)));
    return 0;
}

int cmd_transpile(const std::string &in, const std::string &device, const std::string &layout_s,
                  const std::string &routing_s, const std::string &gateset_s, bool optimize,
                  uint64_t seed, const std::string &out, const std::string &metrics_path) {
    Circuit logical = parse_circuit(slurp(in));
    Device dev = load_device(device);
    GateSetId gs = gateset_from_name(gateset_s);

    Circuit translated = translate(logical, gs, optimize);
    LayoutMap lm = layout(translated, dev, layout_strategy_from_name(layout_s), seed);
    RouteResult routed = route(translated, dev, lm, routing_strategy_from_name(routing_s), seed);
    Circuit physical = translate(routed.circuit, gs, optimize);

    spit(out, emit_circuit(physical));
    if (!metrics_path.empty()) {
        SwapMetrics m = overhead_metrics(logical, physical);
        nlohmann::json j{{"swaps_inserted", routed.metrics.swaps_inserted},
                         {"pct_2q_overhead", routed.metrics.pct_of_original_2q},
                         {"gates_added_per_original", m.gates_added_per_original},
                         {"layout", layout_s},
                         {"routing", routing_s},
                         {"gateset", gateset_s},
                         {"seed", seed}};
        spit(metrics_path, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_noise(const std::string &in, const std::string &model, double p,
              const std::string &model_file, const std::string &device, double inter_qpu_scale,
              const std::string &out) {
    Circuit c = parse_circuit(slurp(in));
    Device dev;
    bool have_dev = !device.empty();
    if (have_dev) dev = load_device(device);

    NoiseModel m;
    if (!model_file.empty()) {
        m = noise_from_json(slurp(model_file));
    } else if (model == "uniform") {
        m = uniform_noise(p);
    } else if (model == "si1000") {
        m = si1000(p);
    } else if (model == "device") {
        if (!have_dev) throw std::runtime_error("--model device needs --device");
        m = device_noise(dev);
    } else {
        throw std::runtime_error("unknown noise model '" + model + "'");
    }
    m.inter_qpu_scale = inter_qpu_scale;
    spit(out, emit_circuit(apply_noise(c, m, have_dev ? &dev : nullptr)));
    return 0;
}

int cmd_dem(const std::string &in, const std::string &out) {
    Dem dem = compile_dem(parse_circuit(slurp(in)));
    for (const std::string &w : dem.warnings) std::cerr << "warning: " << w << "\n";
    spit(out, emit_dem(dem));
    return 0;
}

int cmd_sample(const std::string &in, uint64_t shots, uint64_t seed, int threads,
               const std::string &out, const std::string &obs_out, bool csv) {
    FrameSampleResult r = frame_sample(parse_circuit(slurp(in)), shots, seed, threads);
    if (csv) {
        write_csv(r.detectors, out);
        if (!obs_out.empty()) write_csv(r.observables, obs_out);
    } else {
        write_b8(r.detectors, out);
        if (!obs_out.empty()) write_b8(r.observables, obs_out);
    }
    return 0;
}

int cmd_decode(const std::string &dem_path, const std::string &dets_path,
               const std::string &decoder, const std::string &variant, uint32_t osd_order,
               int threads, const std::string &out, const std::string &actual_obs_path) {
    Dem dem = parse_dem(slurp(dem_path));
    ShotTable dets = read_b8(dets_path, dem.num_detectors);

    ShotTable preds;
    if (decoder == "mwpm") {
        preds = mwpm_decode_batch(MatchingGraph::from_dem(dem), dets, threads);
    } else if (decoder == "bposd") {
        BposdOptions opts;
        opts.variant = bposd_variant_from_name(variant);
        opts.osd_order = osd_order;
        preds = bposd_decode_batch(CheckMatrix::from_dem(dem), dets, opts, threads);
    } else {
        throw std::runtime_error("unknown decoder '" + decoder + "'");
    }
    write_b8(preds, out);

    if (!actual_obs_path.empty()) {
        ShotTable actual = read_b8(actual_obs_path, dem.num_observables);
        RateEstimate ler = logical_error_rate(preds, actual);
        std::cout << "shots " << ler.shots << " failures " << ler.failures << " ler " << ler.rate
                  << " stderr " << ler.stderr_ << "\n";
    }
    return 0;
}

int cmd_run(const std::string &config_path, const std::string &out_dir, int threads) {
    std::vector<ExperimentConfig> cfgs = load_config_file(slurp(config_path));
    std::vector<ExperimentResult> results = run_sweep(cfgs, threads);

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    spit((dir / "results.csv").string(), results_to_csv(results));
    spit((dir / "results.json").string(), results_to_json(results));

    for (const ExperimentResult &r : results) {
        std::cout << r.cfg.name << ": ler " << r.ler.rate << " +/- " << r.ler.stderr_ << " ("
                  << r.failures << "/" << r.shots << "), swaps " << r.swaps_inserted << ", "
                  << r.wall_ms << " ms\n";
    }
    std::cout << "wrote " << (dir / "results.csv").string() << " and "
              << (dir / "results.json").string() << "\n";
    return 0;
}

int cmd_device(const std::string &name, double quality_mean, double quality_stddev,
               uint64_t quality_seed, bool shuttling, double pitch, double speed,
               const std::string &out) {
    ExperimentConfig probe;
    probe.device = name;
    probe.quality.mean_t_us = quality_mean;
    probe.quality.stddev_us = quality_stddev;
    probe.quality.seed = quality_seed;
    probe.shuttling = shuttling;
    probe.shuttle_pitch_um = pitch;
    probe.shuttle_speed_um_per_us = speed;
    spit(out, device_to_json(build_device(probe)) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"desk-scale QEC benchmarking pipeline"};
    app.require_subcommand(1);

    // generate
    std::string g_family = "surface", g_out = "-";
    uint32_t g_distance = 3, g_rounds = 0, g_m1 = 0, g_m2 = 0;
    CLI::App *gen = app.add_subcommand("generate", "emit an encoded-memory circuit");
    gen->add_option("--family", g_family, "repetition|surface|bacon_shor|steane|bb");
    gen->add_option("--distance", g_distance);
    gen->add_option("--rounds", g_rounds, "0 means one round per unit distance");
    gen->add_option("--m1", g_m1, "Bacon-Shor rows");
    gen->add_option("--m2", g_m2, "Bacon-Shor columns");
    gen->add_option("-o,--out", g_out);

    // transpile
    std::string t_in, t_device = "complete:25", t_layout = "trivial", t_routing = "sabre";
    std::string t_gateset = "stim_clifford", t_out = "-", t_metrics;
    bool t_opt = false;
    uint64_t t_seed = 0;
    CLI::App *tr = app.add_subcommand("transpile", "map a circuit onto a device");
    tr->add_option("input", t_in)->required();
    tr->add_option("--device", t_device, "JSON file, preset name, or topology like grid:5x5");
    tr->add_option("--layout", t_layout, "trivial|dense|sabre");
    tr->add_option("--routing", t_routing, "basic|stochastic|sabre");
    tr->add_option("--gateset", t_gateset, "stim_clifford|heron|h2");
    tr->add_flag("--optimize", t_opt, "peephole cleanup after translation");
    tr->add_option("--seed", t_seed);
    tr->add_option("-o,--out", t_out);
    tr->add_option("--metrics", t_metrics, "write overhead metrics JSON here");

    // noise
    std::string n_in, n_model = "uniform", n_file, n_device, n_out = "-";
    double n_p = 0.001, n_scale = 1.0;
    CLI::App *no = app.add_subcommand("noise", "inject circuit-level noise");
    no->add_option("input", n_in)->required();
    no->add_option("--model", n_model, "uniform|si1000|device");
    no->add_option("--p", n_p, "base physical error rate");
    no->add_option("--file", n_file, "full noise model JSON (overrides --model)");
    no->add_option("--device", n_device, "device for rates, edge scaling, shuttle costs");
    no->add_option("--inter-qpu-scale", n_scale);
    no->add_option("-o,--out", n_out);

    // dem
    std::string d_in, d_out = "-";
    CLI::App *de = app.add_subcommand("dem", "compile a detector error model");
    de->add_option("input", d_in)->required();
    de->add_option("-o,--out", d_out);

    // sample
    std::string s_in, s_out, s_obs;
    uint64_t s_shots = 1000, s_seed = 0;
    int s_threads = 0;
    bool s_csv = false;
    CLI::App *sa = app.add_subcommand("sample", "Pauli-frame sample a noisy circuit");
    sa->add_option("input", s_in)->required();
    sa->add_option("--shots", s_shots);
    sa->add_option("--seed", s_seed);
    sa->add_option("--threads", s_threads, "0 defers to QECFORGE_THREADS");
    sa->add_option("-o,--out", s_out, "detector table (b8)")->required();
    sa->add_option("--obs", s_obs, "also write the observable table here");
    sa->add_flag("--csv", s_csv, "write CSV instead of packed b8");

    // decode
    std::string c_dem, c_dets, c_decoder = "mwpm", c_variant = "batch", c_out, c_actual;
    uint32_t c_osd = 0;
    int c_threads = 0;
    CLI::App *dc = app.add_subcommand("decode", "predict observables from detector data");
    dc->add_option("--dem", c_dem)->required();
    dc->add_option("--dets", c_dets)->required();
    dc->add_option("--decoder", c_decoder, "mwpm|bposd");
    dc->add_option("--variant", c_variant, "parity-check|batch");
    dc->add_option("--osd-order", c_osd);
    dc->add_option("--threads", c_threads);
    dc->add_option("-o,--out", c_out, "prediction table (b8)")->required();
    dc->add_option("--actual-obs", c_actual, "observable table; prints the logical error rate");

    // run
    std::string r_config, r_out = "results";
    int r_threads = 0;
    CLI::App *ru = app.add_subcommand("run", "run a declarative experiment sweep");
    ru->add_option("--config", r_config)->required();
    ru->add_option("--out", r_out, "output directory");
    ru->add_option("--threads", r_threads, "0 defers to QECFORGE_THREADS");

    // device
    std::string v_name, v_out = "-";
    double v_qmean = 0, v_qstd = 0, v_pitch = 50.0, v_speed = 100.0;
    uint64_t v_qseed = 0;
    bool v_shuttle = false;
    CLI::App *dv = app.add_subcommand("device", "emit a device description JSON");
    dv->add_option("--name", v_name, "preset name or topology like cuboid:2x2x4")->required();
    dv->add_option("--quality-mean", v_qmean, "sample per-qubit T1/T2 around this (us)");
    dv->add_option("--quality-stddev", v_qstd);
    dv->add_option("--quality-seed", v_qseed);
    dv->add_flag("--shuttling", v_shuttle, "add shuttle links between non-adjacent pairs");
    dv->add_option("--pitch-um", v_pitch);
    dv->add_option("--speed-um-per-us", v_speed);
    dv->add_option("-o,--out", v_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(g_family, g_distance, g_rounds, g_m1, g_m2, g_out);
        if (tr->parsed())
            return cmd_transpile(t_in, t_device, t_layout, t_routing, t_gateset, t_opt, t_seed,
                                 t_out, t_metrics);
        if (no->parsed()) return cmd_noise(n_in, n_model, n_p, n_file, n_device, n_scale, n_out);
        if (de->parsed()) return cmd_dem(d_in, d_out);
        if (sa->parsed()) return cmd_sample(s_in, s_shots, s_seed, s_threads, s_out, s_obs, s_csv);
        if (dc->parsed())
            return cmd_decode(c_dem, c_dets, c_decoder, c_variant, c_osd, c_threads, c_out,
                              c_actual);
        if (ru->parsed()) return cmd_run(r_config, r_out, r_threads);
        if (dv->parsed())
            return cmd_device(v_name, v_qmean, v_qstd, v_qseed, v_shuttle, v_pitch, v_speed,
                              v_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
