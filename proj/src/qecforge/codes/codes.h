#ifndef QECFORGE_CODES_CODES_H
#define QECFORGE_CODES_CODES_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qecforge/circuit/circuit.h"
#include "qecforge/util/rational.h"

namespace qecforge {

enum class CodeFamily : uint8_t {
    repetition,
    rotated_surface,
    bacon_shor,
    steane_concat,
    bivariate_bicycle,
    color,      // rate/distance formulas only
    heavy_hex,  // rate/distance formulas only
};

CodeFamily code_family_from_name(const std::string &name);
const char *code_family_name(CodeFamily family);

struct CodeSpec {
    CodeFamily family = CodeFamily::rotated_surface;
    // Distance. Steane: 3^level. Bivariate bicycle: fixed by the check
    // polynomials (12 for the default gross code).
    uint32_t distance = 3;
    // 0 picks the default of one round per unit of distance.
    uint32_t rounds = 0;
    // Bacon-Shor grid, m1 rows x m2 columns; 0 means distance x distance.
    uint32_t m1 = 0, m2 = 0;
    // Bivariate bicycle check polynomials A and B over x^i y^j terms,
    // acting on an l x m torus. Defaults give the [[144,12,12]] gross code.
    uint32_t bb_l = 12, bb_m = 6;
    std::vector<std::pair<uint32_t, uint32_t>> bb_a = {{3, 0}, {0, 1}, {0, 2}};
    std::vector<std::pair<uint32_t, uint32_t>> bb_b = {{0, 3}, {1, 0}, {2, 0}};

    uint32_t rounds_or_default() const {
        return rounds ? rounds : distance;
    }
    uint32_t steane_level() const;  // distance 3 -> 1, 9 -> 2, 27 -> 3

    // Throws std::invalid_argument when the parameters are outside the
    // supported family ranges (even distances, non-power-of-3 Steane, ...).
    void validate() const;
};

struct Stabilizer {
    bool is_x = false;
    std::vector<uint32_t> support;  // data qubit ids, sorted
};

struct CodeLayout {
    uint32_t num_qubits = 0;  // data + ancilla, the circuit's qubit count
    std::vector<uint32_t> data_qubits;
    std::vector<uint32_t> ancilla_qubits;
    std::vector<std::array<double, 2>> coords;  // indexed by qubit id
    std::vector<Stabilizer> stabilizers;
    std::vector<std::vector<uint32_t>> logical_z;  // one support per logical qubit
};

// Memory experiment in the Z basis: reset, `rounds` syndrome-extraction
// rounds with detectors comparing consecutive rounds (Z checks are also
// compared against the deterministic initialization), final data
// measurement folded into closing detectors, one observable per logical
// qubit. Throws for families without circuit generation.
Circuit generate_memory(const CodeSpec &spec);

// Qubit layout and stabilizer structure backing generate_memory.
CodeLayout code_layout(const CodeSpec &spec);

// Logical-to-physical ratio, exact.
Rational encoding_rate(const CodeSpec &spec);

// Data + ancilla total for the generated instance (formula-based for the
// circuit-less families).
uint32_t memory_qubit_count(const CodeSpec &spec);

// Largest supported distance whose memory_qubit_count fits the budget;
// empty if the smallest instance does not fit.
std::optional<uint32_t> max_distance(CodeFamily family, uint32_t qubit_budget);

// t = floor((d-1)/2)
uint32_t correctable_errors(uint32_t d);

// Internal per-family entry points (spec already validated).
Circuit generate_repetition_memory(uint32_t distance, uint32_t rounds);
Circuit generate_surface_memory(uint32_t distance, uint32_t rounds);
Circuit generate_bacon_shor_memory(uint32_t m1, uint32_t m2, uint32_t rounds);
Circuit generate_steane_memory(uint32_t level, uint32_t rounds);
Circuit generate_bb_memory(const CodeSpec &spec);
CodeLayout repetition_layout(uint32_t distance);
CodeLayout surface_layout(uint32_t distance);
CodeLayout bacon_shor_layout(uint32_t m1, uint32_t m2);
CodeLayout steane_layout(uint32_t level);
CodeLayout bb_layout(const CodeSpec &spec);

}  // namespace qecforge

#endif
