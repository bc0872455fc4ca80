#include "qecforge/codes/codes.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "qecforge/sim/frame.h"
#include "qecforge/sim/tableau.h"
#include "qecforge/util/gf2.h"

namespace qecforge {
namespace {

CodeSpec spec_of(CodeFamily family, uint32_t d, uint32_t rounds = 0) {
    CodeSpec s;
    s.family = family;
    s.distance = d;
    s.rounds = rounds;
    return s;
}

void expect_noiseless_detectors_quiet(const Circuit &c) {
    for (uint64_t trial = 0; trial < 3; trial++) {
        auto run = tableau_run(c, 0x5EED + trial, trial);
        for (size_t i = 0; i < run.detectors.size(); i++) {
            ASSERT_FALSE(run.detectors[i]) << "detector " << i << " fired, trial " << trial;
        }
    }
}

void expect_layout_consistent(const CodeLayout &layout) {
    // Even overlap between X-type and Z-type stabilizers.
    for (size_t a = 0; a < layout.stabilizers.size(); a++) {
        for (size_t b = a + 1; b < layout.stabilizers.size(); b++) {
            if (layout.stabilizers[a].is_x == layout.stabilizers[b].is_x) {
                continue;
            }
            std::vector<uint32_t> overlap;
            std::set_intersection(
                layout.stabilizers[a].support.begin(), layout.stabilizers[a].support.end(),
                layout.stabilizers[b].support.begin(), layout.stabilizers[b].support.end(),
                std::back_inserter(overlap));
            ASSERT_EQ(overlap.size() % 2, 0u) << "stabilizers " << a << "," << b;
        }
    }
    // The logical operator commutes with X stabilizers and is not a product
    // of Z stabilizers.
    std::vector<const Stabilizer *> z_stabs;
    for (const auto &s : layout.stabilizers) {
        if (!s.is_x) {
            z_stabs.push_back(&s);
        }
    }
    for (const auto &logical : layout.logical_z) {
        for (const auto &s : layout.stabilizers) {
            if (!s.is_x) {
                continue;
            }
            std::vector<uint32_t> overlap;
            std::set_intersection(
                s.support.begin(), s.support.end(), logical.begin(), logical.end(),
                std::back_inserter(overlap));
            ASSERT_EQ(overlap.size() % 2, 0u);
        }
        BitMat m(z_stabs.size(), layout.num_qubits);
        for (size_t r = 0; r < z_stabs.size(); r++) {
            for (uint32_t q : z_stabs[r]->support) {
                m.set(r, q, true);
            }
        }
        std::vector<uint32_t> pivots;
        gf2_rref(m, &pivots);
        std::vector<uint64_t> vec((layout.num_qubits + 63) / 64, 0);
        for (uint32_t q : logical) {
            vec[q >> 6] |= 1ULL << (q & 63);
        }
        EXPECT_FALSE(gf2_reduce_against(m, pivots, vec).empty())
            << "logical operator is a stabilizer product";
    }
}

TEST(Repetition, MatchesExpectedShape) {
    Circuit c = generate_repetition_memory(3, 1);
    EXPECT_EQ(c.num_qubits, 5u);
    EXPECT_EQ(c.num_detectors, 4u);  // 2 per round + 2 final
    EXPECT_EQ(c.num_observables, 1u);
    EXPECT_EQ(c.num_measurements, 5u);
    expect_noiseless_detectors_quiet(c);

    Circuit c3 = generate_repetition_memory(3, 3);
    EXPECT_EQ(c3.num_detectors, (3u - 1) * (3 + 1));
    expect_noiseless_detectors_quiet(c3);
}

TEST(Repetition, LayoutInvariants) {
    expect_layout_consistent(repetition_layout(5));
}

TEST(Surface, MatchesExpectedShape) {
    Circuit c = generate_surface_memory(3, 3);
    EXPECT_EQ(c.num_qubits, 17u);  // 9 data + 8 ancilla
    // 4 first-round Z checks + 8 per later round + 4 final: 8 per round.
    EXPECT_EQ(c.num_detectors, 8u * 3);
    EXPECT_EQ(c.num_observables, 1u);
    expect_noiseless_detectors_quiet(c);
}

TEST(Surface, DistanceFiveRuns) {
    Circuit c = generate_surface_memory(5, 2);
    EXPECT_EQ(c.num_qubits, 49u);
    expect_noiseless_detectors_quiet(c);
}

TEST(Surface, LayoutInvariants) {
    for (uint32_t d : {3u, 5u}) {
        CodeLayout layout = surface_layout(d);
        EXPECT_EQ(layout.data_qubits.size(), (size_t)d * d);
        EXPECT_EQ(layout.ancilla_qubits.size(), (size_t)d * d - 1);
        EXPECT_EQ(layout.logical_z[0].size(), (size_t)d);
        size_t x_count = 0;
        for (const auto &s : layout.stabilizers) {
            x_count += s.is_x;
            EXPECT_TRUE(s.support.size() == 2 || s.support.size() == 4);
        }
        EXPECT_EQ(x_count, ((size_t)d * d - 1) / 2);
        expect_layout_consistent(layout);
    }
}

TEST(BaconShor, MatchesExpectedShape) {
    Circuit c = generate_bacon_shor_memory(3, 3, 2);
    EXPECT_EQ(c.num_qubits, 9u + 2 * 3 * 2);  // data + 2d(d-1) gauge ancillas
    // Z stabilizers every round + X stabilizers from the second round +
    // final Z closure.
    EXPECT_EQ(c.num_detectors, 2u * 2 + 2u * 1 + 2u);
    expect_noiseless_detectors_quiet(c);
}

TEST(BaconShor, AsymmetricGrid) {
    Circuit c = generate_bacon_shor_memory(3, 5, 1);
    EXPECT_EQ(c.num_qubits, 15u + 3 * 4 + 2 * 5);
    expect_noiseless_detectors_quiet(c);
    expect_layout_consistent(bacon_shor_layout(3, 5));
}

TEST(BaconShor, LayoutInvariants) {
    expect_layout_consistent(bacon_shor_layout(3, 3));
}

TEST(Steane, MatchesExpectedShape) {
    Circuit c1 = generate_steane_memory(1, 2);
    EXPECT_EQ(c1.num_qubits, 7u + 6u);
    EXPECT_EQ(c1.num_observables, 1u);
    expect_noiseless_detectors_quiet(c1);

    Circuit c2 = generate_steane_memory(2, 1);
    EXPECT_EQ(c2.num_qubits, 49u + 48u);
    expect_noiseless_detectors_quiet(c2);
}

TEST(Steane, LevelThreeCounts) {
    CodeLayout layout = steane_layout(3);
    EXPECT_EQ(layout.data_qubits.size(), 343u);
    EXPECT_EQ(layout.ancilla_qubits.size(), 342u);
    // Outermost stabilizers act on 4 of 7 sub-blocks of 49.
    size_t max_weight = 0;
    for (const auto &s : layout.stabilizers) {
        max_weight = std::max(max_weight, s.support.size());
    }
    EXPECT_EQ(max_weight, 4u * 49u);
}

TEST(Steane, LayoutInvariants) {
    expect_layout_consistent(steane_layout(1));
    expect_layout_consistent(steane_layout(2));
}

TEST(Gross, MatchesExpectedShape) {
    CodeSpec spec = spec_of(CodeFamily::bivariate_bicycle, 12, 2);
    Circuit c = generate_memory(spec);
    EXPECT_EQ(c.num_qubits, 288u);
    EXPECT_EQ(c.num_observables, 12u);
    // 72 Z detectors per round, 72 X from the second round, 72 final.
    EXPECT_EQ(c.num_detectors, 72u * 2 + 72u * 1 + 72u);
    expect_noiseless_detectors_quiet(c);
}

TEST(Gross, LayoutInvariants) {
    CodeSpec spec = spec_of(CodeFamily::bivariate_bicycle, 12);
    CodeLayout layout = bb_layout(spec);
    EXPECT_EQ(layout.logical_z.size(), 12u);
    EXPECT_EQ(layout.data_qubits.size(), 144u);
    for (const auto &s : layout.stabilizers) {
        EXPECT_EQ(s.support.size(), 6u);
    }
    expect_layout_consistent(layout);
}

TEST(Codes, EncodingRates) {
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::rotated_surface, 11)), Rational(1, 241));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::rotated_surface, 3)), Rational(1, 17));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::bacon_shor, 5)), Rational(1, 25));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::bivariate_bicycle, 12)), Rational(1, 24));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::steane_concat, 3)), Rational(1, 14));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::steane_concat, 9)), Rational(1, 98));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::steane_concat, 27)), Rational(1, 686));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::color, 5)), Rational(1, 49));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::color, 3)), Rational(4, 64));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::heavy_hex, 3)), Rational(1, 19));
    EXPECT_EQ(encoding_rate(spec_of(CodeFamily::repetition, 3)), Rational(1, 5));
}

TEST(Codes, MaxDistance) {
    EXPECT_EQ(max_distance(CodeFamily::rotated_surface, 60), 5u);
    EXPECT_EQ(max_distance(CodeFamily::rotated_surface, 40), 3u);
    EXPECT_EQ(max_distance(CodeFamily::rotated_surface, 20), 3u);
    EXPECT_EQ(max_distance(CodeFamily::rotated_surface, 17), 3u);
    EXPECT_FALSE(max_distance(CodeFamily::rotated_surface, 16).has_value());
    EXPECT_EQ(max_distance(CodeFamily::rotated_surface, 97), 7u);
    EXPECT_EQ(max_distance(CodeFamily::repetition, 9), 5u);
    EXPECT_EQ(max_distance(CodeFamily::bivariate_bicycle, 288), 12u);
    EXPECT_FALSE(max_distance(CodeFamily::bivariate_bicycle, 287).has_value());
    EXPECT_EQ(max_distance(CodeFamily::steane_concat, 100), 9u);
}

TEST(Codes, CorrectableErrors) {
    EXPECT_EQ(correctable_errors(3), 1u);
    EXPECT_EQ(correctable_errors(1), 0u);
    EXPECT_EQ(correctable_errors(27), 13u);
    EXPECT_EQ(correctable_errors(12), 5u);
}

TEST(Codes, QubitTotalsMonotone) {
    for (CodeFamily f : {CodeFamily::repetition, CodeFamily::rotated_surface,
                         CodeFamily::bacon_shor, CodeFamily::color, CodeFamily::heavy_hex}) {
        uint32_t last = 0;
        for (uint32_t d = 3; d <= 11; d += 2) {
            uint32_t total = memory_qubit_count(spec_of(f, d));
            EXPECT_GT(total, last);
            last = total;
        }
    }
}

TEST(Codes, ValidationRejectsBadSpecs) {
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::rotated_surface, 4)), std::invalid_argument);
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::repetition, 1)), std::invalid_argument);
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::steane_concat, 5)), std::invalid_argument);
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::steane_concat, 81)), std::invalid_argument);
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::color, 3)), std::invalid_argument);
    EXPECT_THROW(generate_memory(spec_of(CodeFamily::heavy_hex, 3)), std::invalid_argument);
    CodeSpec bad_bb = spec_of(CodeFamily::bivariate_bicycle, 10);
    EXPECT_THROW(generate_memory(bad_bb), std::invalid_argument);
}

TEST(Codes, FamilyNames) {
    EXPECT_EQ(code_family_from_name("surface"), CodeFamily::rotated_surface);
    EXPECT_EQ(code_family_from_name("gross"), CodeFamily::bivariate_bicycle);
    EXPECT_EQ(code_family_from_name("bacon_shor"), CodeFamily::bacon_shor);
    EXPECT_THROW(code_family_from_name("shor"), std::invalid_argument);
    EXPECT_STREQ(code_family_name(CodeFamily::steane_concat), "steane_concat");
}

TEST(Codes, GeneratorsAreDeterministic) {
    CodeSpec spec = spec_of(CodeFamily::rotated_surface, 3, 2);
    EXPECT_EQ(emit_circuit(generate_memory(spec)), emit_circuit(generate_memory(spec)));
}

TEST(Codes, FrameSamplerAcceptsGeneratedCircuits) {
    // The frame sampler cross-checks determinism with tableau references;
    // gauge-operator randomness (Bacon-Shor) must be tolerated.
    for (auto spec : {spec_of(CodeFamily::repetition, 3, 2),
                      spec_of(CodeFamily::rotated_surface, 3, 2),
                      spec_of(CodeFamily::bacon_shor, 3, 2),
                      spec_of(CodeFamily::steane_concat, 3, 2)}) {
        Circuit c = generate_memory(spec);
        auto res = frame_sample(c, 128, 7);
        for (uint32_t det = 0; det < c.num_detectors; det++) {
            EXPECT_EQ(res.detectors.count_bit(det), 0u);
        }
        for (uint32_t obs = 0; obs < c.num_observables; obs++) {
            EXPECT_EQ(res.observables.count_bit(obs), 0u);
        }
    }
}

}  // namespace
}  // namespace qecforge
