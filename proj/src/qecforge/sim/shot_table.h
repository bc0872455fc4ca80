#ifndef QECFORGE_SIM_SHOT_TABLE_H
#define QECFORGE_SIM_SHOT_TABLE_H

#include <cstdint>
#include <string>
#include <vector>

namespace qecforge {

// Bit-packed shot data, row-major: one row per shot, bits packed
// little-endian within each byte (bit k of byte j is sample 8j+k).
struct ShotTable {
    size_t shots = 0;
    size_t bits_per_shot = 0;
    std::vector<uint64_t> words;

    ShotTable() = default;
    ShotTable(size_t shots, size_t bits_per_shot)
        : shots(shots), bits_per_shot(bits_per_shot), words(shots * words_per_shot(), 0) {}

    size_t words_per_shot() const {
        return (bits_per_shot + 63) / 64;
    }
    bool get(size_t shot, size_t bit) const {
        return (words[shot * words_per_shot() + (bit >> 6)] >> (bit & 63)) & 1;
    }
    void flip(size_t shot, size_t bit) {
        words[shot * words_per_shot() + (bit >> 6)] ^= 1ULL << (bit & 63);
    }
    void set(size_t shot, size_t bit, bool v) {
        if (get(shot, bit) != v) {
            flip(shot, bit);
        }
    }
    uint64_t *row(size_t shot) {
        return words.data() + shot * words_per_shot();
    }
    const uint64_t *row(size_t shot) const {
        return words.data() + shot * words_per_shot();
    }
    size_t count_bit(size_t bit) const;  // popcount of one column

    bool operator==(const ShotTable &o) const {
        return shots == o.shots && bits_per_shot == o.bits_per_shot && words == o.words;
    }
};

// b8: each shot is ceil(bits/8) bytes, bits little-endian within bytes.
void write_b8(const ShotTable &t, const std::string &path);
ShotTable read_b8(const std::string &path, size_t bits_per_shot);

// CSV fallback: one line per shot of comma-separated 0/1.
void write_csv(const ShotTable &t, const std::string &path);
ShotTable read_csv(const std::string &path);

// Dispatch on extension (".b8" packed, ".csv" text).
void write_shots(const ShotTable &t, const std::string &path);
ShotTable read_shots(const std::string &path, size_t bits_per_shot);

}  // namespace qecforge

#endif
