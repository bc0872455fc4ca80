#ifndef QECFORGE_SIM_FRAME_H
#define QECFORGE_SIM_FRAME_H

#include <cstdint>

#include "qecforge/circuit/circuit.h"
#include "qecforge/sim/shot_table.h"

namespace qecforge {

// Batched Pauli-frame sampler. Propagates X/Z flip frames against the
// noiseless reference circuit, 64 shots per word. Detector bits are flips
// of the (deterministically zero) reference detectors; observable bits are
// flips of the reference observables.
//
// Requires every detector/observable of the noiseless circuit to be
// deterministic (verified with one tableau run; throws otherwise).
//
// threads <= 0 picks QECFORGE_THREADS from the environment, falling back to
// the hardware count. Results are byte-identical for any thread count.
struct FrameSampleResult {
    ShotTable detectors;
    ShotTable observables;
    ShotTable records;  // empty unless want_records
};

FrameSampleResult frame_sample(
    const Circuit &c, size_t shots, uint64_t seed, int threads = 0, bool want_records = false);

// Monte-Carlo detector sampling through the full tableau simulator, one
// run per shot. Slow; used as the ground-truth cross-check.
struct TableauSampleResult {
    ShotTable detectors;
    ShotTable observables;
};
TableauSampleResult tableau_sample(const Circuit &c, size_t shots, uint64_t seed, int threads = 0);

int resolve_thread_count(int threads);

}  // namespace qecforge

#endif
