#include "qecforge/codes/codes.h"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace qecforge {

namespace {

const char *kFamilyNames[] = {
    "repetition", "rotated_surface", "bacon_shor", "steane_concat",
    "bivariate_bicycle", "color", "heavy_hex",
};

bool is_gross(const CodeSpec &s) {
    return s.bb_l == 12 && s.bb_m == 6 &&
           s.bb_a == std::vector<std::pair<uint32_t, uint32_t>>{{3, 0}, {0, 1}, {0, 2}} &&
           s.bb_b == std::vector<std::pair<uint32_t, uint32_t>>{{0, 3}, {1, 0}, {2, 0}};
}

}  // namespace

CodeFamily code_family_from_name(const std::string &name) {
    for (size_t i = 0; i < std::size(kFamilyNames); i++) {
        if (name == kFamilyNames[i]) {
            return (CodeFamily)i;
        }
    }
    // Friendlier aliases for the CLI.
    if (name == "surface") {
        return CodeFamily::rotated_surface;
    }
    if (name == "steane") {
        return CodeFamily::steane_concat;
    }
    if (name == "bb" || name == "gross") {
        return CodeFamily::bivariate_bicycle;
    }
    throw std::invalid_argument("unknown code family: " + name);
}

const char *code_family_name(CodeFamily family) {
    return kFamilyNames[(size_t)family];
}

uint32_t CodeSpec::steane_level() const {
    uint32_t d = distance, level = 0;
    while (d > 1 && d % 3 == 0) {
        d /= 3;
        level++;
    }
    if (d != 1 || level == 0) {
        throw std::invalid_argument("steane_concat distance must be a power of 3");
    }
    return level;
}

void CodeSpec::validate() const {
    if (rounds_or_default() < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    switch (family) {
        case CodeFamily::repetition:
        case CodeFamily::rotated_surface:
            if (distance < 3 || distance % 2 == 0) {
                throw std::invalid_argument(
                    std::string(code_family_name(family)) + " distance must be odd and >= 3");
            }
            break;
        case CodeFamily::bacon_shor: {
            uint32_t r = m1 ? m1 : distance;
            uint32_t c = m2 ? m2 : distance;
            if (r < 3 || c < 3) {
                throw std::invalid_argument("bacon_shor grid must be at least 3x3");
            }
            if (std::min(r, c) != distance) {
                throw std::invalid_argument("bacon_shor distance must equal min(m1, m2)");
            }
            if (distance % 2 == 0) {
                throw std::invalid_argument("bacon_shor distance must be odd");
            }
            break;
        }
        case CodeFamily::steane_concat: {
            uint32_t level = steane_level();
            if (level > 3) {
                throw std::invalid_argument("steane_concat supports distances 3, 9, 27");
            }
            break;
        }
        case CodeFamily::bivariate_bicycle:
            if (bb_l == 0 || bb_m == 0 || bb_a.empty() || bb_b.empty()) {
                throw std::invalid_argument("bivariate_bicycle polynomials must be nonempty");
            }
            if (is_gross(*this) && distance != 12) {
                throw std::invalid_argument("the gross code has distance 12");
            }
            break;
        case CodeFamily::color:
        case CodeFamily::heavy_hex:
            if (distance < 3 || distance % 2 == 0) {
                throw std::invalid_argument(
                    std::string(code_family_name(family)) + " distance must be odd and >= 3");
            }
            break;
    }
}

Circuit generate_memory(const CodeSpec &spec) {
    spec.validate();
    uint32_t rounds = spec.rounds_or_default();
    switch (spec.family) {
        case CodeFamily::repetition:
            return generate_repetition_memory(spec.distance, rounds);
        case CodeFamily::rotated_surface:
            return generate_surface_memory(spec.distance, rounds);
        case CodeFamily::bacon_shor:
            return generate_bacon_shor_memory(
                spec.m1 ? spec.m1 : spec.distance, spec.m2 ? spec.m2 : spec.distance, rounds);
        case CodeFamily::steane_concat:
            return generate_steane_memory(spec.steane_level(), rounds);
        case CodeFamily::bivariate_bicycle:
            return generate_bb_memory(spec);
        default:
            throw std::invalid_argument(
                std::string(code_family_name(spec.family)) + " has no circuit generator");
    }
}

CodeLayout code_layout(const CodeSpec &spec) {
    spec.validate();
    switch (spec.family) {
        case CodeFamily::repetition:
            return repetition_layout(spec.distance);
        case CodeFamily::rotated_surface:
            return surface_layout(spec.distance);
        case CodeFamily::bacon_shor:
            return bacon_shor_layout(spec.m1 ? spec.m1 : spec.distance, spec.m2 ? spec.m2 : spec.distance);
        case CodeFamily::steane_concat:
            return steane_layout(spec.steane_level());
        case CodeFamily::bivariate_bicycle:
            return bb_layout(spec);
        default:
            throw std::invalid_argument(
                std::string(code_family_name(spec.family)) + " has no layout generator");
    }
}

Rational encoding_rate(const CodeSpec &spec) {
    spec.validate();
    int64_t d = spec.distance;
    switch (spec.family) {
        case CodeFamily::repetition:
            return Rational(1, 2 * d - 1);
        case CodeFamily::rotated_surface:
            return Rational(1, 2 * d * d - 1);
        case CodeFamily::bacon_shor: {
            int64_t r = spec.m1 ? spec.m1 : d;
            int64_t c = spec.m2 ? spec.m2 : d;
            return Rational(1, r * c);
        }
        case CodeFamily::steane_concat: {
            int64_t den = 2;
            for (uint32_t i = 0; i < spec.steane_level(); i++) {
                den *= 7;
            }
            return Rational(1, den);
        }
        case CodeFamily::bivariate_bicycle: {
            CodeLayout layout = bb_layout(spec);
            int64_t n = 2 * (int64_t)spec.bb_l * spec.bb_m;
            return Rational((int64_t)layout.logical_z.size(), 2 * n);
        }
        case CodeFamily::color:
            return Rational(4, (3 * d - 1) * (3 * d - 1));
        case CodeFamily::heavy_hex:
            return Rational(2, 5 * d * d - 2 * d - 1);
    }
    throw std::logic_error("unreachable");
}

uint32_t memory_qubit_count(const CodeSpec &spec) {
    spec.validate();
    uint64_t d = spec.distance;
    switch (spec.family) {
        case CodeFamily::repetition:
            return (uint32_t)(2 * d - 1);
        case CodeFamily::rotated_surface:
            return (uint32_t)(2 * d * d - 1);
        case CodeFamily::bacon_shor: {
            uint64_t r = spec.m1 ? spec.m1 : d;
            uint64_t c = spec.m2 ? spec.m2 : d;
            return (uint32_t)(r * c + r * (c - 1) + (r - 1) * c);
        }
        case CodeFamily::steane_concat: {
            uint64_t n = 1;
            for (uint32_t i = 0; i < spec.steane_level(); i++) {
                n *= 7;
            }
            return (uint32_t)(2 * n - 1);
        }
        case CodeFamily::bivariate_bicycle:
            return 4 * spec.bb_l * spec.bb_m;
        case CodeFamily::color:
            return (uint32_t)((3 * d - 1) * (3 * d - 1) / 4);
        case CodeFamily::heavy_hex:
            return (uint32_t)((5 * d * d - 2 * d - 1) / 2);
    }
    throw std::logic_error("unreachable");
}

std::optional<uint32_t> max_distance(CodeFamily family, uint32_t qubit_budget) {
    auto fits = [&](uint32_t d) {
        CodeSpec s;
        s.family = family;
        s.distance = d;
        return memory_qubit_count(s) <= qubit_budget;
    };
    if (family == CodeFamily::bivariate_bicycle) {
        CodeSpec s;
        s.family = family;
        s.distance = 12;
        if (memory_qubit_count(s) <= qubit_budget) {
            return 12;
        }
        return std::nullopt;
    }
    if (family == CodeFamily::steane_concat) {
        uint32_t best = 0;
        for (uint32_t d = 3; d <= 27; d *= 3) {
            if (fits(d)) {
                best = d;
            }
        }
        if (best) {
            return best;
        }
        return std::nullopt;
    }
    if (!fits(3)) {
        return std::nullopt;
    }
    uint32_t d = 3;
    while (fits(d + 2)) {
        d += 2;
    }
    return d;
}

uint32_t correctable_errors(uint32_t d) {
    if (d < 1) {
        throw std::invalid_argument("distance must be at least 1");
    }
    return (d - 1) / 2;
}

}  // namespace qecforge
