#ifndef QECFORGE_UTIL_RATIONAL_H
#define QECFORGE_UTIL_RATIONAL_H

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qecforge {

// Exact reduced fraction. Encoding rates are reported in these so tests can
// compare without float tolerance.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) {
        if (den == 0) {
            throw std::invalid_argument("rational with zero denominator");
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool operator==(const Rational &other) const {
        return num == other.num && den == other.den;
    }
    bool operator!=(const Rational &other) const {
        return !(*this == other);
    }

    double to_double() const {
        return (double)num / (double)den;
    }

    std::string str() const {
        if (den == 1) {
            return std::to_string(num);
        }
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace qecforge

#endif
