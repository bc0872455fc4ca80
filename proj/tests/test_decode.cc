#include "qecforge/decode/decode.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracle_util.h"
#include "qecforge/sim/dem.h"

using namespace qecforge;

namespace {

// Three-mechanism chain: the canonical small matchable model.
Dem chain_dem() {
    Dem dem;
    dem.num_detectors = 2;
    dem.num_observables = 1;
    dem.mechanisms.push_back({0.1, {0, kObsFlag | 0}});
    dem.mechanisms.push_back({0.1, {0, 1}});
    dem.mechanisms.push_back({0.1, {1}});
    return dem;
}

}  // namespace

TEST(Weights, LogLikelihoodRatio) {
    EXPECT_NEAR(mechanism_weight(0.1), std::log(9.0), 1e-12);
    EXPECT_DOUBLE_EQ(mechanism_weight(0.5), 0.0);
    EXPECT_GT(mechanism_weight(1e-30), 0.0);  // clamped, stays finite
    EXPECT_TRUE(std::isfinite(mechanism_weight(1.0)));
}

TEST(Mwpm, ChainExamples) {
    MatchingGraph g = MatchingGraph::from_dem(chain_dem());
    EXPECT_EQ(g.edges.size(), 3u);

    MwpmResult none = mwpm_decode(g, {0, 0});
    EXPECT_EQ(none.obs, 0u);
    EXPECT_DOUBLE_EQ(none.weight, 0.0);

    MwpmResult d0 = mwpm_decode(g, {1, 0});
    EXPECT_EQ(d0.obs, 1u);  // single boundary edge beats the two-edge path
    EXPECT_NEAR(d0.weight, std::log(9.0), 1e-12);

    MwpmResult both = mwpm_decode(g, {1, 1});
    EXPECT_EQ(both.obs, 0u);  // middle edge alone
    EXPECT_NEAR(both.weight, std::log(9.0), 1e-12);

    MwpmResult d1 = mwpm_decode(g, {0, 1});
    EXPECT_EQ(d1.obs, 0u);
}

TEST(Mwpm, RejectsHyperedgesAndBadInput) {
    Dem dem;
    dem.num_detectors = 3;
    dem.mechanisms.push_back({0.1, {0, 1, 2}});
    EXPECT_THROW(MatchingGraph::from_dem(dem), std::invalid_argument);

    MatchingGraph g = MatchingGraph::from_dem(chain_dem());
    EXPECT_THROW(mwpm_decode(g, {1}), std::invalid_argument);
}

TEST(Mwpm, UnmatchableSyndromeReportsFailure) {
    Dem dem;
    dem.num_detectors = 2;
    dem.mechanisms.push_back({0.1, {0, 1}});
    MatchingGraph g = MatchingGraph::from_dem(dem);
    MwpmResult r = mwpm_decode(g, {1, 0});
    EXPECT_FALSE(r.matched);
    EXPECT_TRUE(std::isinf(r.weight));
}

TEST(Mwpm, WeightMatchesExhaustiveMinimum) {
    size_t checked = 0;
    for (uint64_t seed = 0; seed < 50; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        OracleTable oracle = oracle_sweep(dem);
        MatchingGraph g = MatchingGraph::from_dem(dem);
        std::vector<uint8_t> events(dem.num_detectors);
        for (uint32_t synd = 0; synd < (1u << dem.num_detectors); synd++) {
            for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (synd >> d) & 1;
            MwpmResult r = mwpm_decode(g, events);
            if (std::isinf(oracle.min_w[synd])) {
                EXPECT_FALSE(r.matched) << "seed " << seed << " synd " << synd;
            } else {
                ASSERT_TRUE(r.matched) << "seed " << seed << " synd " << synd;
                EXPECT_NEAR(r.weight, oracle.min_w[synd], 1e-6)
                    << "seed " << seed << " synd " << synd;
                checked++;
            }
        }
    }
    EXPECT_GT(checked, 5000u);
}

TEST(Mwpm, LargeDefectSetsUseGreedyPath) {
    // 18 fired detectors on a chain forces the non-exhaustive matcher.
    // Boundary edges are expensive, so the optimum is nine adjacent pairs.
    Dem dem;
    dem.num_detectors = 18;
    dem.mechanisms.push_back({0.01, {0}});
    for (uint32_t i = 0; i + 1 < 18; i++) dem.mechanisms.push_back({0.1, {i, i + 1}});
    dem.mechanisms.push_back({0.01, {17}});
    MatchingGraph g = MatchingGraph::from_dem(dem);
    std::vector<uint8_t> events(18, 1);
    MwpmResult r = mwpm_decode(g, events);
    ASSERT_TRUE(r.matched);
    EXPECT_NEAR(r.weight, 9.0 * std::log(9.0), 1e-9);
}

TEST(Mwpm, BatchMatchesSingleShotAndThreadCount) {
    Dem dem = random_graphlike_dem(7, 10, 18);
    MatchingGraph g = MatchingGraph::from_dem(dem);
    DemSample sample = dem_sample(dem, 600, 42);
    ShotTable p1 = mwpm_decode_batch(g, sample.detectors, 1);
    ShotTable p4 = mwpm_decode_batch(g, sample.detectors, 4);
    EXPECT_TRUE(p1 == p4);
    std::vector<uint8_t> events(dem.num_detectors);
    for (size_t shot = 0; shot < 40; shot++) {
        for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = sample.detectors.get(shot, d);
        MwpmResult r = mwpm_decode(g, events);
        for (uint32_t o = 0; o < dem.num_observables; o++) {
            EXPECT_EQ(p1.get(shot, o), ((r.obs >> o) & 1) != 0);
        }
    }
}

TEST(Mwpm, RepetitionCodeCapacityRate) {
    // Chain model with p=0.1 per data qubit: majority vote fails when two
    // or more errors land, so the rate is 3p^2 - 2p^3.
    Dem dem = chain_dem();
    MatchingGraph g = MatchingGraph::from_dem(dem);
    size_t shots = 100000;
    DemSample sample = dem_sample(dem, shots, 1234);
    ShotTable preds = mwpm_decode_batch(g, sample.detectors);
    RateEstimate est = logical_error_rate(preds, sample.observables);
    double expect = 3 * 0.01 - 2 * 0.001;
    EXPECT_NEAR(est.rate, expect, 3 * std::sqrt(expect * (1 - expect) / shots));
}

TEST(CheckMatrixType, FromDemAndValidate) {
    CheckMatrix h = CheckMatrix::from_dem(chain_dem());
    EXPECT_EQ(h.num_checks, 2u);
    EXPECT_EQ(h.num_cols, 3u);
    EXPECT_EQ(h.col_obs[0], 1u);
    EXPECT_EQ(h.cols[1], (std::vector<uint32_t>{0, 1}));

    CheckMatrix bad;
    bad.num_checks = 1;
    bad.num_cols = 1;
    bad.cols = {{}};
    bad.col_obs = {0};
    bad.prior = {0.1};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(BruteForce, ChainAndRepetitionExamples) {
    CheckMatrix h = CheckMatrix::from_dem(chain_dem());
    BruteForceResult d0 = brute_force_decode(h, {1, 0});
    EXPECT_TRUE(d0.feasible);
    EXPECT_EQ(d0.error, (std::vector<uint8_t>{1, 0, 0}));
    EXPECT_EQ(d0.obs, 1u);
    BruteForceResult both = brute_force_decode(h, {1, 1});
    EXPECT_EQ(both.error, (std::vector<uint8_t>{0, 1, 0}));
    EXPECT_EQ(both.obs, 0u);

    CheckMatrix rep = CheckMatrix::from_dense({{1, 1, 0}, {0, 1, 1}}, {{1, 0, 0}},
                                              {0.1, 0.1, 0.1});
    BruteForceResult r = brute_force_decode(rep, {1, 0});
    EXPECT_EQ(r.error, (std::vector<uint8_t>{1, 0, 0}));
}

TEST(BruteForce, TieBreaksLexicographicallyAndCapsSize) {
    // Two single-detector mechanisms with identical priors tie; the
    // lexicographically smaller error vector (0,1) wins.
    CheckMatrix h = CheckMatrix::from_dense({{1, 1}}, {{0, 1}}, {0.2, 0.2});
    BruteForceResult r = brute_force_decode(h, {1});
    EXPECT_EQ(r.error, (std::vector<uint8_t>{0, 1}));
    EXPECT_EQ(r.obs, 1u);
    EXPECT_FALSE(r.unique);

    CheckMatrix big;
    big.num_checks = 1;
    big.num_cols = 25;
    big.cols.assign(25, {0});
    big.col_obs.assign(25, 0);
    big.prior.assign(25, 0.1);
    EXPECT_THROW(brute_force_decode(big, {1}), std::invalid_argument);

    Dem infeasible;
    infeasible.num_detectors = 2;
    infeasible.mechanisms.push_back({0.1, {0, 1}});
    BruteForceResult miss = brute_force_decode(CheckMatrix::from_dem(infeasible), {1, 0});
    EXPECT_FALSE(miss.feasible);
}

TEST(BruteForce, AgreesWithSweepTable) {
    for (uint64_t seed = 100; seed < 110; seed++) {
        Dem dem = random_graphlike_dem(seed, 8, 12);
        OracleTable oracle = oracle_sweep(dem);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        std::vector<uint8_t> events(dem.num_detectors);
        for (uint32_t synd = 0; synd < (1u << dem.num_detectors); synd++) {
            for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (synd >> d) & 1;
            BruteForceResult r = brute_force_decode(h, events);
            if (std::isinf(oracle.min_w[synd])) {
                EXPECT_FALSE(r.feasible);
                continue;
            }
            ASSERT_TRUE(r.feasible);
            EXPECT_NEAR(r.weight, oracle.min_w[synd], 1e-9);
            EXPECT_EQ(r.unique, oracle.unique[synd] != 0);
            if (r.unique) EXPECT_EQ(r.obs, oracle.cls[synd]);
        }
    }
}

TEST(Bposd, ZeroSyndromeAndRepetitionExample) {
    CheckMatrix rep = CheckMatrix::from_dense({{1, 1, 0}, {0, 1, 1}}, {{1, 0, 0}},
                                              {0.1, 0.1, 0.1});
    BposdResult zero = bposd_decode(rep, {0, 0});
    EXPECT_TRUE(zero.converged);
    EXPECT_EQ(zero.error, (std::vector<uint8_t>{0, 0, 0}));
    EXPECT_EQ(zero.obs, 0u);

    BposdResult r = bposd_decode(rep, {1, 0});
    EXPECT_EQ(r.error, (std::vector<uint8_t>{1, 0, 0}));
    EXPECT_EQ(r.obs, 1u);

    EXPECT_THROW(bposd_decode(rep, {1}), std::invalid_argument);
}

TEST(Bposd, NearMlAgreementOnUniqueOptima) {
    // Scaled min-sum is approximate on loopy graphs: even tiny models have
    // syndromes where BP settles on a heavier coset, so exact ML agreement
    // over a full syndrome sweep is not a property this decoder has. Track
    // the agreement level instead so regressions show up.
    size_t checked = 0, agree = 0;
    for (uint64_t seed = 200; seed < 240; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        OracleTable oracle = oracle_sweep(dem);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        std::vector<uint8_t> events(dem.num_detectors);
        for (uint32_t synd = 0; synd < (1u << dem.num_detectors); synd++) {
            if (std::isinf(oracle.min_w[synd]) || !oracle.unique[synd]) continue;
            for (uint32_t d = 0; d < dem.num_detectors; d++) events[d] = (synd >> d) & 1;
            BposdResult r = bposd_decode(h, events);
            if (r.obs == oracle.cls[synd]) agree++;
            checked++;
        }
    }
    EXPECT_GT(checked, 5000u);
    EXPECT_GE(double(agree) / double(checked), 0.92);
}

TEST(Bposd, FailureRateWithinSamplingToleranceOfMl) {
    // On shots drawn from the model itself, the OSD-0 logical failure rate
    // stays within 3 sigma of the exact-ML failure rate.
    size_t shots_total = 0, bp_fail = 0, ml_fail = 0;
    for (uint64_t seed = 200; seed < 240; seed++) {
        Dem dem = random_graphlike_dem(seed, 10, 14);
        CheckMatrix h = CheckMatrix::from_dem(dem);
        DemSample samp = dem_sample(dem, 500, seed * 13 + 1);
        std::vector<uint8_t> events(dem.num_detectors);
        for (size_t k = 0; k < 500; k++) {
            uint64_t actual = 0;
            for (uint32_t o = 0; o < dem.num_observables; o++) {
                if (samp.observables.get(k, o)) actual |= 1ULL << o;
            }
            for (uint32_t d = 0; d < dem.num_detectors; d++) {
                events[d] = samp.detectors.get(k, d);
            }
            if (bposd_decode(h, events).obs != actual) bp_fail++;
            if (brute_force_decode(h, events).obs != actual) ml_fail++;
            shots_total++;
        }
    }
    double pa = double(bp_fail) / shots_total;
    double pb = double(ml_fail) / shots_total;
    double sigma = std::sqrt(pa * (1 - pa) / shots_total + pb * (1 - pb) / shots_total);
    EXPECT_LE(pa, pb + 3 * sigma);
    EXPECT_GE(pb, 0.0);
}

TEST(Bposd, HandlesHyperedgeModels) {
    // A three-detector mechanism breaks matching but not the check-matrix
    // view: fire all three detectors and expect the hyperedge column.
    Dem dem;
    dem.num_detectors = 3;
    dem.num_observables = 1;
    dem.mechanisms.push_back({0.05, {0, 1, 2, kObsFlag | 0}});
    dem.mechanisms.push_back({0.05, {0}});
    dem.mechanisms.push_back({0.05, {1}});
    dem.mechanisms.push_back({0.05, {2}});
    EXPECT_THROW(MatchingGraph::from_dem(dem), std::invalid_argument);
    CheckMatrix h = CheckMatrix::from_dem(dem);
    BposdResult r = bposd_decode(h, {1, 1, 1});
    EXPECT_EQ(r.error, (std::vector<uint8_t>{1, 0, 0, 0}));
    EXPECT_EQ(r.obs, 1u);
}

TEST(Bposd, BatchVariantsAndThreadsAgree) {
    Dem dem = random_graphlike_dem(9, 10, 16);
    CheckMatrix h = CheckMatrix::from_dem(dem);
    DemSample sample = dem_sample(dem, 500, 77);
    BposdOptions pc;
    pc.variant = BposdVariant::parity_check;
    BposdOptions batch;
    batch.variant = BposdVariant::batch;
    ShotTable a = bposd_decode_batch(h, sample.detectors, pc, 1);
    ShotTable b = bposd_decode_batch(h, sample.detectors, batch, 1);
    ShotTable c = bposd_decode_batch(h, sample.detectors, batch, 3);
    EXPECT_TRUE(a == b);
    EXPECT_TRUE(b == c);
    EXPECT_EQ(bposd_variant_from_name("parity-check"), BposdVariant::parity_check);
    EXPECT_EQ(bposd_variant_name(BposdVariant::batch), "batch");
    EXPECT_THROW(bposd_variant_from_name("turbo"), std::invalid_argument);
}

TEST(Rates, BinomialArithmeticAndInvariance) {
    ShotTable pred(1000, 1), act(1000, 1);
    for (size_t s = 0; s < 5; s++) act.flip(s, 0);
    RateEstimate est = logical_error_rate(pred, act);
    EXPECT_DOUBLE_EQ(est.rate, 0.005);
    EXPECT_NEAR(est.stderr_, 0.00223, 1e-4);
    EXPECT_EQ(est.failures, 5u);

    RateEstimate clean = logical_error_rate(act, act);
    EXPECT_DOUBLE_EQ(clean.rate, 0.0);

    // permuting shots leaves the rate untouched
    ShotTable pred2(1000, 1), act2(1000, 1);
    for (size_t s = 0; s < 5; s++) act2.flip(999 - s, 0);
    RateEstimate est2 = logical_error_rate(pred2, act2);
    EXPECT_DOUBLE_EQ(est2.rate, est.rate);

    ShotTable wrong(999, 1);
    EXPECT_THROW(logical_error_rate(wrong, act), std::invalid_argument);
}
