#ifndef QECFORGE_SIM_TABLEAU_H
#define QECFORGE_SIM_TABLEAU_H

#include <cstdint>
#include <vector>

#include "qecforge/circuit/circuit.h"

namespace qecforge {

// Aaronson-Gottesman stabilizer tableau: 2n generator rows (destabilizers
// then stabilizers) with sign bits. Row k of the identity tableau is X_k for
// destabilizers and Z_k for stabilizers; gates conjugate every row.
class TableauSim {
  public:
    explicit TableauSim(size_t n);

    size_t num_qubits() const {
        return n;
    }

    // Unitary gates only (dispatches on op; pairs consumed for 2q ops).
    void apply_unitary(const Instruction &inst);

    void do_h(uint32_t q);
    void do_s(uint32_t q);
    void do_s_dag(uint32_t q);
    void do_x(uint32_t q);
    void do_y(uint32_t q);
    void do_z(uint32_t q);
    void do_cx(uint32_t c, uint32_t t);

    struct MeasureResult {
        bool value;
        bool random;
    };
    // Z-basis measurement. `coin` supplies the outcome when it is random.
    MeasureResult measure(uint32_t q, bool coin);
    // Z-basis reset: measure and flip into |0>.
    MeasureResult reset(uint32_t q, bool coin);

    struct PauliRow {
        std::vector<uint64_t> x;
        std::vector<uint64_t> z;
        bool sign;
    };
    // Image of X_q (destabilizer row) / Z_q (stabilizer row) under the
    // gates applied so far. Only meaningful before any measurement.
    PauliRow x_image(uint32_t q) const;
    PauliRow z_image(uint32_t q) const;

    // Verifies the symplectic invariants (row commutation structure).
    bool check_symplectic() const;

  private:
    size_t n;
    size_t w;  // words per row
    std::vector<uint64_t> xs, zs;
    std::vector<uint8_t> rs;
    std::vector<uint64_t> tmp_x, tmp_z;

    bool xbit(size_t row, uint32_t q) const {
        return (xs[row * w + (q >> 6)] >> (q & 63)) & 1;
    }
    bool zbit(size_t row, uint32_t q) const {
        return (zs[row * w + (q >> 6)] >> (q & 63)) & 1;
    }
    void rowsum(size_t h, size_t i);
    int rowsum_phase(const uint64_t *xi, const uint64_t *zi, const uint64_t *xh, const uint64_t *zh) const;
};

// One noisy shot. Measurement outcomes and channel samples are drawn from
// the counter RNG keyed by (seed, shot, instruction position), so a given
// (seed, shot) pair always reproduces the same record.
struct TableauRunResult {
    std::vector<bool> records;
    std::vector<bool> record_random;  // outcome was a coin flip
    std::vector<bool> detectors;
    std::vector<bool> observables;
};
TableauRunResult tableau_run(const Circuit &c, uint64_t seed, uint64_t shot = 0);

}  // namespace qecforge

#endif
