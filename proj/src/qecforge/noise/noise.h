#ifndef QECFORGE_NOISE_NOISE_H
#define QECFORGE_NOISE_NOISE_H

#include <map>
#include <string>

#include "qecforge/arch/device.h"
#include "qecforge/circuit/circuit.h"
#include "qecforge/transpile/tracker.h"

namespace qecforge {

enum class NoiseKind : uint8_t { uniform, si1000_modified, device };

const char *noise_kind_name(NoiseKind k);
NoiseKind noise_kind_from_name(const std::string &name);

struct PauliProbs {
    double p_x = 0, p_y = 0, p_z = 0;
    double sum() const {
        return p_x + p_y + p_z;
    }
};

struct NoiseRates {
    double p_1q = 0;
    double p_2q = 0;
    double p_meas_flip = 0;
    double p_reset = 0;
    double p_idle = 0;
    // Idle rate while a measurement or reset is in flight somewhere in the
    // same tick window (resonators light up; spectators suffer more).
    double p_idle_meas_window = 0;
    double p_crosstalk = 0;
    double p_leakage = 0;
};

struct ShuttleParams {
    // When set, shuttled pairs take a flat depolarizing hit instead of the
    // movement-time decoherence law (trapped-ion presets work this way).
    bool use_fixed_rate = false;
    double fixed_p = 0;
    // Coherence times used for the movement law when the device has no
    // per-qubit samples. Zero disables the channel.
    double t1_us = 0;
    double t2_us = 0;
};

struct NoiseModel {
    NoiseKind kind = NoiseKind::uniform;
    double base_p = 0;
    NoiseRates rates;
    std::map<std::string, double> durations_us;  // per gate name
    double inter_qpu_scale = 1.0;  // multiplies the edge error_scale
    double tick_duration_us = 1.0;
    bool leak_propagate_to_partner = true;
    ShuttleParams shuttle;

    void validate() const;  // throws std::invalid_argument
};

// All gate, measure, reset, and idle rates equal to p; no crosstalk/leakage.
NoiseModel uniform_noise(double p);

// Superconducting-style model scaled by p, covering every two-qubit gate:
// p_2q = p, p_1q = p/10, measurement flip 5p, reset 2p, idle p/10 (2p while
// a measurement or reset shares the tick window). Requires p in [0, 0.1].
NoiseModel si1000(double p);

// Builds a device-kind model from the rates a preset carries. SPAM feeds
// both the measurement-flip and reset rates.
NoiseModel device_noise(const Device &d);

// Pauli-twirled idle decoherence over dt: p_x = p_y = (1 - e^(-dt/T1))/4,
// p_z = (1 + e^(-dt/T1) - 2 e^(-dt/T2))/4. Requires T2 <= 2 T1, dt >= 0.
PauliProbs twirl_idle(double dt, double t1, double t2);

// Decoherence accrued moving a qubit to its partner and back:
// twirl_idle(2 * distance * pitch / max_speed, T1, T2).
PauliProbs shuttle_error(double distance, double pitch, double max_speed, double t1, double t2);

// Inserts noise channels around the gates of a clean circuit. The device
// (optional) supplies edge scales, crosstalk neighborhoods, per-qubit
// coherence times, and shuttle-link durations; the tracker (optional) is
// validated against the circuit and device. Throws std::invalid_argument
// when the input already contains noise or when tracker/device/circuit
// disagree about qubit counts.
Circuit apply_noise(const Circuit &c, const NoiseModel &m, const Device *d = nullptr,
                    const TrackerLog *t = nullptr);

std::string noise_to_json(const NoiseModel &m);
NoiseModel noise_from_json(const std::string &text);

}  // namespace qecforge

#endif
