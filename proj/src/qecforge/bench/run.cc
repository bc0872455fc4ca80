#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qecforge/bench/bench.h"
#include "qecforge/sim/dem.h"
#include "qecforge/sim/frame.h"
#include "qecforge/util/rng.h"

namespace qecforge {

namespace {

// Rethrows any stage failure with the stage name attached, so a sweep log
// says which part of which pipeline fell over.
template <typename F>
auto stage(const char *name, F &&f) {
    try {
        return f();
    } catch (const std::exception &e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

RateEstimate make_rate(uint64_t failures, uint64_t shots) {
    RateEstimate est;
    est.failures = failures;
    est.shots = shots;
    est.rate = shots ? static_cast<double>(failures) / shots : 0.0;
    est.stderr_ = shots ? std::sqrt(est.rate * (1.0 - est.rate) / shots) : 0.0;
    return est;
}

uint64_t count_symptom_shots(const ShotTable &dets, const ShotTable &obs) {
    uint64_t bad = 0;
    size_t dw = dets.words_per_shot(), ow = obs.words_per_shot();
    for (size_t s = 0; s < obs.shots; s++) {
        bool hit = false;
        if (dets.shots == obs.shots) {
            const uint64_t *row = dets.row(s);
            for (size_t w = 0; w < dw && !hit; w++) hit = row[w] != 0;
        }
        const uint64_t *row = obs.row(s);
        for (size_t w = 0; w < ow && !hit; w++) hit = row[w] != 0;
        if (hit) bad++;
    }
    return bad;
}

ExperimentResult run_idle(const ExperimentConfig &cfg, const NoiseModel &nm, int threads) {
    Circuit c = cfg.pipeline == PipelineKind::idle_gadget
                    ? repetition_idle_gadget(nm.rates.p_idle, nm.rates.p_2q,
                                             nm.rates.p_meas_flip)
                    : unprotected_idle_circuit(nm.rates.p_idle);
    ExperimentResult res;
    res.cfg = cfg;
    res.config_hash = config_hash(cfg);
    uint64_t failures = 0, shots_done = 0;
    for (uint32_t rep = 0; rep < cfg.repetitions; rep++) {
        uint64_t rep_shots = cfg.shots / cfg.repetitions +
                             (rep + 1 == cfg.repetitions ? cfg.shots % cfg.repetitions : 0);
        if (!rep_shots) continue;
        RateEstimate est = gadget_error_rate(c, rep_shots, keyed_u64(cfg.seed, 202, rep),
                                             threads);
        failures += est.failures;
        shots_done += est.shots;
    }
    res.ler = make_rate(failures, shots_done);
    res.failures = failures;
    res.shots = shots_done;
    return res;
}

}  // namespace

RateEstimate gadget_error_rate(const Circuit &c, uint64_t shots, uint64_t seed, int threads) {
    FrameSampleResult sample = frame_sample(c, shots, seed, threads);
    return make_rate(count_symptom_shots(sample.detectors, sample.observables), shots);
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    int threads = resolve_thread_count(cfg.threads);
    Device dev = stage("device", [&] { return build_device(cfg); });
    NoiseModel nm = stage("noise-model", [&] {
        NoiseModel m = cfg.noise.build(dev);
        m.validate();
        return m;
    });

    ExperimentResult res;
    if (cfg.pipeline != PipelineKind::memory) {
        res = run_idle(cfg, nm, threads);
    } else {
        Circuit logical = stage("generate", [&] { return generate_memory(cfg.code); });
        res.cfg = cfg;
        res.config_hash = config_hash(cfg);
        uint64_t failures = 0, shots_done = 0;
        double swaps = 0, pct2q = 0, added = 0;
        for (uint32_t rep = 0; rep < cfg.repetitions; rep++) {
            uint64_t rep_shots = cfg.shots / cfg.repetitions +
                                 (rep + 1 == cfg.repetitions ? cfg.shots % cfg.repetitions : 0);
            uint64_t rep_seed = keyed_u64(cfg.seed, 101, rep);
            Circuit translated =
                stage("translate", [&] { return translate(logical, cfg.gateset, cfg.optimize); });
            LayoutMap lm =
                stage("layout", [&] { return layout(translated, dev, cfg.layout, rep_seed); });
            RouteResult routed =
                stage("route", [&] { return route(translated, dev, lm, cfg.routing, rep_seed); });
            Circuit physical = stage(
                "translate", [&] { return translate(routed.circuit, cfg.gateset, cfg.optimize); });
            Circuit noisy =
                stage("noise", [&] { return apply_noise(physical, nm, &dev, &routed.tracker); });
            Dem dem = stage("dem", [&] { return compile_dem(noisy, true); });
            DemSample sample = stage("sample", [&] {
                return dem_sample(dem, rep_shots, keyed_u64(cfg.seed, 202, rep), threads);
            });
            ShotTable preds = stage("decode", [&] {
                if (cfg.decoder == DecoderKind::mwpm) {
                    MatchingGraph g = MatchingGraph::from_dem(dem);
                    return mwpm_decode_batch(g, sample.detectors, threads);
                }
                CheckMatrix h = CheckMatrix::from_dem(dem);
                BposdOptions opt;
                opt.variant = cfg.resolved_variant();
                opt.osd_order = cfg.osd_order;
                return bposd_decode_batch(h, sample.detectors, opt, threads);
            });
            RateEstimate est =
                stage("rate", [&] { return logical_error_rate(preds, sample.observables); });
            failures += est.failures;
            shots_done += est.shots;
            swaps += routed.metrics.swaps_inserted;
            pct2q += routed.metrics.pct_of_original_2q;
            added += overhead_metrics(logical, physical).gates_added_per_original;
        }
        res.ler = make_rate(failures, shots_done);
        res.failures = failures;
        res.shots = shots_done;
        res.swaps_inserted = swaps / cfg.repetitions;
        res.pct_2q_overhead = pct2q / cfg.repetitions;
        res.gates_added_per_original = added / cfg.repetitions;
    }
    auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return res;
}

std::vector<ExperimentResult> run_sweep(const std::vector<ExperimentConfig> &cfgs, int threads) {
    int total = resolve_thread_count(threads);
    size_t workers = std::min<size_t>(std::max(total, 1), cfgs.size());
    std::vector<ExperimentResult> results(cfgs.size());
    std::vector<std::string> errors(cfgs.size());
    std::atomic<size_t> next{0};
    int inner = std::max<int>(1, total / std::max<size_t>(workers, 1));

    auto work = [&] {
        for (size_t i = next.fetch_add(1); i < cfgs.size(); i = next.fetch_add(1)) {
            try {
                ExperimentConfig cfg = cfgs[i];
                if (cfg.threads <= 0) cfg.threads = inner;
                results[i] = run_experiment(cfg);
            } catch (const std::exception &e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) pool.emplace_back(work);
        for (auto &t : pool) t.join();
    }
    for (size_t i = 0; i < cfgs.size(); i++) {
        if (!errors[i].empty()) {
            throw std::runtime_error("config '" + cfgs[i].name + "': " + errors[i]);
        }
    }
    return results;
}

double estimate_repetition_overhead(double p_idle, double p_gate, double p_meas) {
    if (p_idle < 0 || p_gate < 0 || p_meas < 0 || p_idle > 1 || p_gate > 1 || p_meas > 1) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    double est = 5 * p_idle + 6 * p_gate + 2 * p_meas;
    return est < 0 ? 0 : (est > 1 ? 1 : est);
}

}  // namespace qecforge
