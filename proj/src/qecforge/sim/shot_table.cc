#include "qecforge/sim/shot_table.h"

#include <bit>
#include <fstream>
#include <stdexcept>

namespace qecforge {

size_t ShotTable::count_bit(size_t bit) const {
    size_t n = 0;
    for (size_t s = 0; s < shots; s++) {
        n += get(s, bit);
    }
    return n;
}

void write_b8(const ShotTable &t, const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open for write: " + path);
    }
    size_t bytes = (t.bits_per_shot + 7) / 8;
    std::vector<char> buf(bytes);
    for (size_t s = 0; s < t.shots; s++) {
        const uint64_t *row = t.row(s);
        for (size_t b = 0; b < bytes; b++) {
            buf[b] = (char)((row[b >> 3] >> ((b & 7) * 8)) & 0xff);
        }
        f.write(buf.data(), (std::streamsize)bytes);
    }
}

ShotTable read_b8(const std::string &path, size_t bits_per_shot) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open: " + path);
    }
    f.seekg(0, std::ios::end);
    size_t size = (size_t)f.tellg();
    f.seekg(0);
    size_t bytes = (bits_per_shot + 7) / 8;
    if (bytes == 0 || size % bytes != 0) {
        throw std::runtime_error(
            path + ": size " + std::to_string(size) + " is not a multiple of " + std::to_string(bytes) +
            " bytes per shot");
    }
    ShotTable t(size / bytes, bits_per_shot);
    std::vector<char> buf(bytes);
    for (size_t s = 0; s < t.shots; s++) {
        f.read(buf.data(), (std::streamsize)bytes);
        uint64_t *row = t.row(s);
        for (size_t b = 0; b < bytes; b++) {
            row[b >> 3] |= (uint64_t)(uint8_t)buf[b] << ((b & 7) * 8);
        }
    }
    return t;
}

void write_csv(const ShotTable &t, const std::string &path) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open for write: " + path);
    }
    for (size_t s = 0; s < t.shots; s++) {
        std::string line;
        for (size_t b = 0; b < t.bits_per_shot; b++) {
            if (b) {
                line += ',';
            }
            line += t.get(s, b) ? '1' : '0';
        }
        line += '\n';
        f << line;
    }
}

ShotTable read_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open: " + path);
    }
    std::vector<std::vector<bool>> rows;
    std::string line;
    size_t bits = 0;
    while (std::getline(f, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<bool> row;
        for (char ch : line) {
            if (ch == '0') {
                row.push_back(false);
            } else if (ch == '1') {
                row.push_back(true);
            } else if (ch != ',' && ch != ' ' && ch != '\r') {
                throw std::runtime_error(path + ": unexpected character in csv");
            }
        }
        if (bits == 0) {
            bits = row.size();
        } else if (row.size() != bits) {
            throw std::runtime_error(path + ": ragged csv rows");
        }
        rows.push_back(std::move(row));
    }
    ShotTable t(rows.size(), bits);
    for (size_t s = 0; s < rows.size(); s++) {
        for (size_t b = 0; b < bits; b++) {
            t.set(s, b, rows[s][b]);
        }
    }
    return t;
}

static bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_shots(const ShotTable &t, const std::string &path) {
    if (ends_with(path, ".csv")) {
        write_csv(t, path);
    } else {
        write_b8(t, path);
    }
}

ShotTable read_shots(const std::string &path, size_t bits_per_shot) {
    if (ends_with(path, ".csv")) {
        ShotTable t = read_csv(path);
        if (t.bits_per_shot != bits_per_shot && bits_per_shot != 0) {
            throw std::runtime_error(path + ": csv width does not match expected bit count");
        }
        return t;
    }
    return read_b8(path, bits_per_shot);
}

}  // namespace qecforge
