#ifndef QECFORGE_UTIL_GF2_H
#define QECFORGE_UTIL_GF2_H

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace qecforge {

// Dense GF(2) matrix, 64 columns per word, row-major.
struct BitMat {
    size_t rows = 0;
    size_t cols = 0;
    size_t wpr = 0;
    std::vector<uint64_t> w;

    BitMat() = default;
    BitMat(size_t rows, size_t cols)
        : rows(rows), cols(cols), wpr((cols + 63) / 64), w(rows * wpr, 0) {}

    bool get(size_t r, size_t c) const {
        return (w[r * wpr + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(size_t r, size_t c, bool v) {
        uint64_t mask = 1ULL << (c & 63);
        if (v) {
            w[r * wpr + (c >> 6)] |= mask;
        } else {
            w[r * wpr + (c >> 6)] &= ~mask;
        }
    }
    void xor_rows(size_t dst, size_t src) {
        for (size_t k = 0; k < wpr; k++) {
            w[dst * wpr + k] ^= w[src * wpr + k];
        }
    }
    void swap_rows(size_t a, size_t b) {
        if (a == b) {
            return;
        }
        for (size_t k = 0; k < wpr; k++) {
            std::swap(w[a * wpr + k], w[b * wpr + k]);
        }
    }
    uint64_t *row(size_t r) {
        return w.data() + r * wpr;
    }
    const uint64_t *row(size_t r) const {
        return w.data() + r * wpr;
    }
    bool row_is_zero(size_t r) const {
        for (size_t k = 0; k < wpr; k++) {
            if (w[r * wpr + k]) {
                return false;
            }
        }
        return true;
    }
};

// In-place reduced row echelon form. Returns the rank; records the pivot
// column of each of the first `rank` rows if pivot_cols is given.
inline size_t gf2_rref(BitMat &m, std::vector<uint32_t> *pivot_cols = nullptr) {
    if (pivot_cols) {
        pivot_cols->clear();
    }
    size_t rank = 0;
    for (size_t c = 0; c < m.cols && rank < m.rows; c++) {
        size_t pivot = rank;
        while (pivot < m.rows && !m.get(pivot, c)) {
            pivot++;
        }
        if (pivot == m.rows) {
            continue;
        }
        m.swap_rows(rank, pivot);
        for (size_t r = 0; r < m.rows; r++) {
            if (r != rank && m.get(r, c)) {
                m.xor_rows(r, rank);
            }
        }
        if (pivot_cols) {
            pivot_cols->push_back((uint32_t)c);
        }
        rank++;
    }
    return rank;
}

// Basis of the null space {v : m v = 0}, one sorted support per vector.
inline std::vector<std::vector<uint32_t>> gf2_kernel(BitMat m) {
    std::vector<uint32_t> pivots;
    size_t rank = gf2_rref(m, &pivots);
    std::vector<bool> is_pivot(m.cols, false);
    for (uint32_t c : pivots) {
        is_pivot[c] = true;
    }
    std::vector<std::vector<uint32_t>> basis;
    for (size_t free_c = 0; free_c < m.cols; free_c++) {
        if (is_pivot[free_c]) {
            continue;
        }
        std::vector<uint32_t> v{(uint32_t)free_c};
        for (size_t r = 0; r < rank; r++) {
            if (m.get(r, free_c)) {
                v.push_back(pivots[r]);
            }
        }
        std::sort(v.begin(), v.end());
        basis.push_back(std::move(v));
    }
    return basis;
}

// Reduces `vec` (given as a support set) against an RREF matrix; the
// residual is empty iff vec is in the row space.
inline std::vector<uint32_t> gf2_reduce_against(
    const BitMat &rref, const std::vector<uint32_t> &pivots, std::vector<uint64_t> vec) {
    for (size_t r = 0; r < pivots.size(); r++) {
        uint32_t c = pivots[r];
        if ((vec[c >> 6] >> (c & 63)) & 1) {
            for (size_t k = 0; k < rref.wpr; k++) {
                vec[k] ^= rref.row(r)[k];
            }
        }
    }
    std::vector<uint32_t> support;
    for (size_t k = 0; k < vec.size(); k++) {
        uint64_t bits = vec[k];
        while (bits) {
            support.push_back((uint32_t)(k * 64 + __builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return support;
}

}  // namespace qecforge

#endif
