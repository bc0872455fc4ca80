#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "qecforge/circuit/circuit.h"
#include "qecforge/sim/dem.h"
#include "qecforge/sim/frame.h"
#include "qecforge/sim/shot_table.h"
#include "qecforge/sim/tableau.h"
#include "qecforge/util/rng.h"

namespace qecforge {
namespace {

TEST(Tableau, DeterministicBasics) {
    TableauSim sim(2);
    sim.do_x(0);
    auto m0 = sim.measure(0, false);
    EXPECT_TRUE(m0.value);
    EXPECT_FALSE(m0.random);
    auto m1 = sim.measure(1, false);
    EXPECT_FALSE(m1.value);
    EXPECT_FALSE(m1.random);
}

TEST(Tableau, HadamardMeasurementIsRandomAndSticky) {
    for (bool coin : {false, true}) {
        TableauSim sim(1);
        sim.do_h(0);
        auto m = sim.measure(0, coin);
        EXPECT_TRUE(m.random);
        EXPECT_EQ(m.value, coin);
        auto again = sim.measure(0, !coin);
        EXPECT_FALSE(again.random);
        EXPECT_EQ(again.value, coin);
    }
}

TEST(Tableau, BellPairCorrelates) {
    for (bool coin : {false, true}) {
        TableauSim sim(2);
        sim.do_h(0);
        sim.do_cx(0, 1);
        auto a = sim.measure(0, coin);
        auto b = sim.measure(1, true);
        EXPECT_TRUE(a.random);
        EXPECT_FALSE(b.random);
        EXPECT_EQ(a.value, b.value);
    }
}

TEST(Tableau, ResetForcesZero) {
    TableauSim sim(1);
    sim.do_h(0);
    sim.reset(0, true);
    auto m = sim.measure(0, true);
    EXPECT_FALSE(m.random);
    EXPECT_FALSE(m.value);
}

TEST(Tableau, ImagesTrackConjugation) {
    TableauSim sim(2);
    sim.do_h(0);
    // H maps X0 -> Z0.
    auto img = sim.x_image(0);
    EXPECT_EQ(img.x[0], 0u);
    EXPECT_EQ(img.z[0], 1u);
    EXPECT_FALSE(img.sign);
    // H maps Z0 -> X0.
    auto zimg = sim.z_image(0);
    EXPECT_EQ(zimg.x[0], 1u);
    EXPECT_EQ(zimg.z[0], 0u);

    sim.do_cx(0, 1);
    // CX maps Z0 (now X0 after H) through: X on control propagates to target.
    auto prop = sim.z_image(0);
    EXPECT_EQ(prop.x[0], 3u);
    EXPECT_EQ(prop.z[0], 0u);
}

TEST(Tableau, SignTracking) {
    TableauSim sim(1);
    sim.do_x(0);
    // X anticommutes with Z: Z -> -Z.
    auto z = sim.z_image(0);
    EXPECT_TRUE(z.sign);
    EXPECT_EQ(z.z[0], 1u);
    sim.do_x(0);
    EXPECT_FALSE(sim.z_image(0).sign);
}

TEST(Tableau, CompositeGatesMatchPrimitiveSequences) {
    // SX == H S H, CZ == H(t) CX H(t), SWAP == CX CX CX, applied to a state
    // scrambled by a fixed prefix; verify via stabilizer images.
    Circuit prefix = parse_circuit("H 0\nS 1\nCX 0 2\nS_DAG 2\nH 1\n");
    auto scramble = [&](TableauSim &sim) {
        for (const Instruction &inst : prefix.instructions) {
            sim.apply_unitary(inst);
        }
    };

    {
        TableauSim a(3), b(3);
        scramble(a);
        scramble(b);
        a.apply_unitary({Op::SX, {}, {Target::qubit(1)}});
        b.do_h(1);
        b.do_s(1);
        b.do_h(1);
        for (uint32_t q = 0; q < 3; q++) {
            EXPECT_EQ(a.x_image(q).x, b.x_image(q).x);
            EXPECT_EQ(a.x_image(q).z, b.x_image(q).z);
            EXPECT_EQ(a.x_image(q).sign, b.x_image(q).sign);
            EXPECT_EQ(a.z_image(q).sign, b.z_image(q).sign);
        }
    }
    {
        TableauSim a(3), b(3);
        scramble(a);
        scramble(b);
        a.apply_unitary({Op::CZ, {}, {Target::qubit(0), Target::qubit(2)}});
        b.do_h(2);
        b.do_cx(0, 2);
        b.do_h(2);
        for (uint32_t q = 0; q < 3; q++) {
            EXPECT_EQ(a.z_image(q).x, b.z_image(q).x);
            EXPECT_EQ(a.z_image(q).z, b.z_image(q).z);
            EXPECT_EQ(a.z_image(q).sign, b.z_image(q).sign);
        }
    }
    {
        TableauSim a(3), b(3);
        scramble(a);
        scramble(b);
        a.apply_unitary({Op::SWAP, {}, {Target::qubit(0), Target::qubit(1)}});
        b.do_cx(0, 1);
        b.do_cx(1, 0);
        b.do_cx(0, 1);
        for (uint32_t q = 0; q < 3; q++) {
            EXPECT_EQ(a.x_image(q).x, b.x_image(q).x);
            EXPECT_EQ(a.x_image(q).z, b.x_image(q).z);
            EXPECT_EQ(a.x_image(q).sign, b.x_image(q).sign);
        }
    }
}

TEST(Tableau, RzDispatch) {
    // RZ(2) == Z: flips the sign of X images.
    TableauSim sim(1);
    sim.apply_unitary({Op::RZ, {2}, {Target::qubit(0)}});
    EXPECT_TRUE(sim.x_image(0).sign);
    // RZ(1) == S, RZ(3) == S_DAG: S then S_DAG is identity.
    TableauSim sim2(1);
    sim2.apply_unitary({Op::RZ, {1}, {Target::qubit(0)}});
    sim2.apply_unitary({Op::RZ, {3}, {Target::qubit(0)}});
    auto img = sim2.x_image(0);
    EXPECT_EQ(img.x[0], 1u);
    EXPECT_EQ(img.z[0], 0u);
    EXPECT_FALSE(img.sign);
}

TEST(Tableau, SymplecticInvariantHolds) {
    TableauSim sim(5);
    CounterRng rng(42, 7);
    for (int step = 0; step < 200; step++) {
        switch (rng.next_below(5)) {
            case 0: sim.do_h(rng.next_below(5)); break;
            case 1: sim.do_s(rng.next_below(5)); break;
            case 2: {
                uint32_t a = rng.next_below(5), b = rng.next_below(5);
                if (a != b) sim.do_cx(a, b);
                break;
            }
            case 3: sim.do_x(rng.next_below(5)); break;
            default: sim.measure(rng.next_below(5), rng.next_bernoulli(0.5)); break;
        }
    }
    EXPECT_TRUE(sim.check_symplectic());
}

TEST(TableauRun, ReproduciblePerSeedAndShot) {
    Circuit c = parse_circuit(
        "R 0 1 2\n"
        "X_ERROR(0.4) 0 1 2\n"
        "CX 0 1\n"
        "DEPOLARIZE1(0.3) 1\n"
        "M 0 1 2\n"
        "DETECTOR rec[-2] rec[-3]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    auto r1 = tableau_run(c, 123, 0);
    auto r2 = tableau_run(c, 123, 0);
    EXPECT_EQ(r1.records, r2.records);
    EXPECT_EQ(r1.detectors, r2.detectors);
    bool any_differs = false;
    for (uint64_t shot = 1; shot < 20 && !any_differs; shot++) {
        any_differs = tableau_run(c, 123, shot).records != r1.records;
    }
    EXPECT_TRUE(any_differs);
}

Circuit small_noisy_circuit() {
    // Bell pair with a parity ancilla, then unwound: every detector is
    // deterministically 0 without noise.
    return parse_circuit(
        "R 0 1 2 3\n"
        "H 0\n"
        "DEPOLARIZE1(0.05) 0 1 2\n"
        "CX 0 1\n"
        "DEPOLARIZE2(0.08) 0 1\n"
        "SX 3\n"
        "X_ERROR(0.1) 3\n"
        "SX_DAG 3\n"
        "CZ 0 3\n"
        "CX 0 2\n"
        "CX 1 2\n"
        "PAULI_CHANNEL_1(0.02,0.03,0.04) 2\n"
        "MR 2\n"
        "Z_ERROR(0.07) 0\n"
        "CX 0 1\n"
        "H 0\n"
        "M 0 1 3\n"
        "DETECTOR rec[-4]\n"
        "DETECTOR rec[-3]\n"
        "DETECTOR rec[-2] rec[-1]\n"
        "OBSERVABLE_INCLUDE(0) rec[-1]\n");
}

TEST(Frame, MatchesTableauMarginals) {
    Circuit c = small_noisy_circuit();
    const size_t shots = 40000;
    auto frame = frame_sample(c, shots, 2024);
    auto tab = tableau_sample(c, shots, 4048);
    ASSERT_EQ(frame.detectors.bits_per_shot, c.num_detectors);
    for (uint32_t d = 0; d < c.num_detectors; d++) {
        double pf = (double)frame.detectors.count_bit(d) / shots;
        double pt = (double)tab.detectors.count_bit(d) / shots;
        double sigma = std::sqrt(2.0 * 0.25 / shots);
        EXPECT_NEAR(pf, pt, 5 * sigma) << "detector " << d;
    }
    double of = (double)frame.observables.count_bit(0) / shots;
    double ot = (double)tab.observables.count_bit(0) / shots;
    EXPECT_NEAR(of, ot, 5 * std::sqrt(2.0 * 0.25 / shots));
}

TEST(Frame, ThreadCountDoesNotChangeBits) {
    Circuit c = small_noisy_circuit();
    auto a = frame_sample(c, 1000, 99, 1, true);
    auto b = frame_sample(c, 1000, 99, 4, true);
    EXPECT_EQ(a.detectors, b.detectors);
    EXPECT_EQ(a.observables, b.observables);
    EXPECT_EQ(a.records, b.records);
}

TEST(Frame, RejectsNondeterministicDetector) {
    Circuit c = parse_circuit("H 0\nM 0\nDETECTOR rec[-1]\n");
    EXPECT_THROW(frame_sample(c, 16, 1), std::invalid_argument);
}

TEST(Frame, AllowsRandomRecordsWithDeterministicParity) {
    // Individually random outcomes whose XOR is pinned by entanglement.
    Circuit c = parse_circuit(
        "H 0\n"
        "CX 0 1\n"
        "X_ERROR(0.2) 1\n"
        "M 0 1\n"
        "DETECTOR rec[-1] rec[-2]\n");
    auto res = frame_sample(c, 6400, 5);
    double rate = (double)res.detectors.count_bit(0) / 6400;
    EXPECT_NEAR(rate, 0.2, 0.03);
}

TEST(Frame, NoiselessCircuitGivesZeroDetectors) {
    Circuit c = parse_circuit(
        "R 0 1\nH 0\nCX 0 1\nM 0 1\nDETECTOR rec[-1] rec[-2]\n");
    auto res = frame_sample(c, 256, 11);
    EXPECT_EQ(res.detectors.count_bit(0), 0u);
}

TEST(Dem, SingleMechanism) {
    Dem dem = compile_dem(parse_circuit("X_ERROR(0.1) 0\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    EXPECT_DOUBLE_EQ(dem.mechanisms[0].p, 0.1);
    EXPECT_EQ(dem.mechanisms[0].symptom, (std::vector<uint32_t>{0}));
}

TEST(Dem, MergesIdenticalSymptoms) {
    Dem dem = compile_dem(parse_circuit(
        "X_ERROR(0.1) 0\nX_ERROR(0.1) 0\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    EXPECT_NEAR(dem.mechanisms[0].p, 0.18, 1e-12);
}

TEST(Dem, DropsInvisibleComponents) {
    // Z before a Z-basis measurement never fires a detector.
    Dem dem = compile_dem(parse_circuit("Z_ERROR(0.25) 0\nM 0\nDETECTOR rec[-1]\n"));
    EXPECT_TRUE(dem.mechanisms.empty());
}

TEST(Dem, Depolarize1SplitsIntoVisibleComponents) {
    // X and Y flip the Z measurement; Z does not. X and Y share a symptom.
    Dem dem = compile_dem(parse_circuit("DEPOLARIZE1(0.3) 0\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    double unit = 0.3 / 3;
    EXPECT_NEAR(dem.mechanisms[0].p, unit + unit - 2 * unit * unit, 1e-12);
}

TEST(Dem, Depolarize2Expansion) {
    Dem dem = compile_dem(parse_circuit(
        "DEPOLARIZE2(0.15) 0 1\nM 0 1\nDETECTOR rec[-2]\nDETECTOR rec[-1]\n"));
    // 15 components at 0.01; 4 hit D0, 4 hit D1, 4 hit both, 3 invisible.
    ASSERT_EQ(dem.mechanisms.size(), 3u);
    double merged = (1 - std::pow(1 - 2 * 0.01, 4)) / 2;
    for (const auto &m : dem.mechanisms) {
        EXPECT_NEAR(m.p, merged, 1e-12);
    }
    EXPECT_THROW(
        compile_dem(parse_circuit("DEPOLARIZE2(0.15) 0 1\nM 0 1\nDETECTOR rec[-1]\n"), false),
        std::invalid_argument);
}

TEST(Dem, ObservablesAppearInSymptoms) {
    Dem dem = compile_dem(parse_circuit(
        "X_ERROR(0.2) 0\nM 0\nDETECTOR rec[-1]\nOBSERVABLE_INCLUDE(0) rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    EXPECT_EQ(dem.mechanisms[0].detectors(), (std::vector<uint32_t>{0}));
    EXPECT_EQ(dem.mechanisms[0].observables(), (std::vector<uint32_t>{0}));
    EXPECT_EQ(dem.num_observables, 1u);
}

TEST(Dem, PropagatesThroughCx) {
    // X on the control before CX spreads to both measured qubits.
    Dem dem = compile_dem(parse_circuit(
        "X_ERROR(0.1) 0\nCX 0 1\nM 0 1\nDETECTOR rec[-2]\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    EXPECT_EQ(dem.mechanisms[0].symptom, (std::vector<uint32_t>{0, 1}));
}

TEST(Dem, FoldsLargeProbabilities) {
    Dem dem = compile_dem(parse_circuit("X_ERROR(0.9) 0\nM 0\nDETECTOR rec[-1]\n"));
    ASSERT_EQ(dem.mechanisms.size(), 1u);
    EXPECT_NEAR(dem.mechanisms[0].p, 0.1, 1e-12);
    EXPECT_FALSE(dem.warnings.empty());
}

TEST(Dem, TextRoundTrip) {
    Dem dem = compile_dem(small_noisy_circuit());
    std::string text = emit_dem(dem);
    Dem back = parse_dem(text);
    EXPECT_EQ(back.num_detectors, dem.num_detectors);
    EXPECT_EQ(back.num_observables, dem.num_observables);
    ASSERT_EQ(back.mechanisms.size(), dem.mechanisms.size());
    for (size_t i = 0; i < dem.mechanisms.size(); i++) {
        EXPECT_EQ(back.mechanisms[i].symptom, dem.mechanisms[i].symptom);
        EXPECT_NEAR(back.mechanisms[i].p, dem.mechanisms[i].p, 1e-15);
    }
}

TEST(Dem, MarginalsMatchFrameSampling) {
    Circuit c = small_noisy_circuit();
    Dem dem = compile_dem(c);
    std::vector<double> q = dem_detector_marginals(dem);
    const size_t shots = 40000;
    auto frame = frame_sample(c, shots, 77);
    ASSERT_EQ(q.size(), c.num_detectors);
    for (uint32_t d = 0; d < c.num_detectors; d++) {
        double observed = (double)frame.detectors.count_bit(d) / shots;
        double sigma = std::sqrt(q[d] * (1 - q[d]) / shots) + 1e-9;
        EXPECT_NEAR(observed, q[d], 5 * sigma) << "detector " << d;
    }
}

TEST(Dem, SampleMatchesMarginals) {
    Dem dem = compile_dem(small_noisy_circuit());
    std::vector<double> q = dem_detector_marginals(dem);
    const size_t shots = 40000;
    auto sample = dem_sample(dem, shots, 31);
    for (uint32_t d = 0; d < dem.num_detectors; d++) {
        double observed = (double)sample.detectors.count_bit(d) / shots;
        double sigma = std::sqrt(q[d] * (1 - q[d]) / shots) + 1e-9;
        EXPECT_NEAR(observed, q[d], 5 * sigma) << "detector " << d;
    }
    auto again = dem_sample(dem, shots, 31, 3);
    EXPECT_EQ(again.detectors, sample.detectors);
}

TEST(ShotTable, BitAccessAndColumnCounts) {
    ShotTable t(3, 70);
    t.set(0, 0, true);
    t.set(1, 69, true);
    t.set(2, 69, true);
    EXPECT_TRUE(t.get(0, 0));
    EXPECT_FALSE(t.get(0, 1));
    EXPECT_EQ(t.count_bit(69), 2u);
    EXPECT_EQ(t.count_bit(0), 1u);
    t.set(1, 69, false);
    EXPECT_EQ(t.count_bit(69), 1u);
}

TEST(ShotTable, B8AndCsvRoundTrip) {
    ShotTable t(5, 11);
    CounterRng rng(8, 8);
    for (size_t s = 0; s < t.shots; s++) {
        for (size_t b = 0; b < t.bits_per_shot; b++) {
            t.set(s, b, rng.next_bernoulli(0.5));
        }
    }
    auto dir = std::filesystem::temp_directory_path();
    std::string b8 = (dir / "qecforge_test_roundtrip.b8").string();
    std::string csv = (dir / "qecforge_test_roundtrip.csv").string();
    write_shots(t, b8);
    write_shots(t, csv);
    EXPECT_EQ(read_shots(b8, 11), t);
    EXPECT_EQ(read_shots(csv, 11), t);
    std::remove(b8.c_str());
    std::remove(csv.c_str());
}

TEST(Rng, KeyedDrawsAreStableAndUniform) {
    EXPECT_EQ(keyed_u64(1, 2, 3), keyed_u64(1, 2, 3));
    EXPECT_NE(keyed_u64(1, 2, 3), keyed_u64(1, 2, 4));
    EXPECT_NE(keyed_u64(1, 2, 3), keyed_u64(2, 2, 3));
    double sum = 0, sumsq = 0;
    const int n = 20000;
    for (int i = 0; i < n; i++) {
        double u = keyed_unit(5, 6, i);
        sum += u;
        sumsq += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
    EXPECT_NEAR(sumsq / n - (sum / n) * (sum / n), 1.0 / 12, 0.01);
    double gsum = 0, gsumsq = 0;
    for (int i = 0; i < n; i++) {
        double g = keyed_gauss(5, 7, i);
        gsum += g;
        gsumsq += g * g;
    }
    EXPECT_NEAR(gsum / n, 0.0, 0.03);
    EXPECT_NEAR(gsumsq / n, 1.0, 0.05);
}

}  // namespace
}  // namespace qecforge
