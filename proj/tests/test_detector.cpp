#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "moddens/detector.hpp"
#include "moddens/generators.hpp"
#include "moddens/metrics.hpp"
#include "moddens/oracle.hpp"

using namespace moddens;
using Catch::Matchers::WithinAbs;

TEST_CASE("detector recovers the bridged K3 pair") {
    const DetectResult r = detect(testutil::two_k3_bridge(), {});
    CHECK(r.partition == testutil::split_at(6, 3));
    CHECK_THAT(r.report.value, WithinAbs(10.0 / 3.0, 1e-9));
}

TEST_CASE("detector merges a clique into one community") {
    const DetectResult r = detect(testutil::clique(6), {});
    CHECK(r.partition.cluster_count() == 1);
    CHECK_THAT(r.report.value, WithinAbs(5.0, 1e-9));
}

TEST_CASE("detector recovers a clique ring") {
    const LabeledGraph ring = gen_ring({3, 4, 5}, {1.0, 1.0, 1.0}, 6);
    const DetectResult r = detect(ring.graph, {});
    CHECK(r.partition == ring.truth);
}

TEST_CASE("trace is strictly monotone in the objective") {
    const LabeledGraph inst = gen_ring({4, 5, 6}, {0.9, 0.8, 1.0}, 17);
    const DetectResult r = detect(inst.graph, {});
    REQUIRE_FALSE(r.trace.empty());
    double prev = -std::numeric_limits<double>::infinity();
    for (const TraceStep& step : r.trace) {
        CHECK(step.gain > 0.0);
        CHECK(step.value_after > prev);
        prev = step.value_after;
    }
    CHECK_THAT(r.trace.back().value_after, WithinAbs(r.report.value, 1e-9));
}

TEST_CASE("rerunning from the result is a fixed point") {
    const LabeledGraph inst = gen_ring({3, 4, 5, 6}, {1.0, 0.9, 0.8, 1.0}, 23);
    const DetectResult first = detect(inst.graph, {});
    DetectorConfig cfg;
    cfg.init = DetectorConfig::Init::given;
    const DetectResult again = detect(inst.graph, cfg, &first.partition);
    CHECK(again.partition == first.partition);
    CHECK(again.trace.empty());
}

TEST_CASE("incremental bookkeeping survives validation on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = gen_random_connected(40, 100, seed, true);
        DetectorConfig cfg;
        cfg.validate = true;
        cfg.seed = seed;
        cfg.move_order = seed % 2 == 0 ? DetectorConfig::MoveOrder::node_id
                                       : DetectorConfig::MoveOrder::shuffled;
        CHECK_NOTHROW(detect(g, cfg));
    }
}

TEST_CASE("detector matches the oracle on small instances") {
    const GeneratorSpec specs[] = {
        {Family::two_communities_bridged, {3, 3}, {1.0, 1.0}, 0, 1},
        {Family::two_communities_bridged, {4, 5}, {1.0, 1.0}, 0, 2},
        {Family::ring_of_communities, {3, 3, 3}, {1.0, 1.0, 1.0}, 0, 3},
        {Family::er_single, {7}, {1.0}, 0, 4},
    };
    for (const GeneratorSpec& spec : specs) {
        const LabeledGraph inst = generate(spec);
        const OracleResult oracle = exhaustive_best(inst.graph, Metric::M);
        const DetectResult r = detect(inst.graph, {});
        CHECK_THAT(r.report.value, WithinAbs(oracle.best_value, 1e-9));
    }
}

TEST_CASE("objectives disagree between their thresholds") {
    // At m=5, n=25 the limiting totals are ~23.9 (D) and ~29.9 (M); w=27 sits
    // between them, so the M objective splits where D merges.
    const int m = 5, n = 25, w = 27;
    REQUIRE(w_threshold_D(m, n) < w);
    REQUIRE(w < w_threshold_M(m, n));
    const LabeledGraph inst = gen_two_cliques_w(m, n, w, 9);
    const DetectorComparison cmp = compare_detectors(inst.graph, {}, &inst.truth);
    CHECK(cmp.m_matches_truth);
    CHECK(cmp.with_m.partition.cluster_count() == 2);
    CHECK(cmp.with_d.partition.cluster_count() == 1);
    CHECK(cmp.m_rand_index > cmp.d_rand_index);
}

TEST_CASE("objectives agree on an equal-size pair with few bridges") {
    const LabeledGraph inst = gen_two_cliques_w(6, 6, 1, 11);
    const DetectorComparison cmp = compare_detectors(inst.graph, {}, &inst.truth);
    CHECK(cmp.m_matches_truth);
    CHECK(cmp.d_matches_truth);
}

TEST_CASE("detector flags disconnected results") {
    const LabeledGraph inst = gen_two_cliques_w(4, 4, 0, 13);
    const DetectResult r = detect(inst.graph, {});
    CHECK(r.partition.cluster_count() == 2);
    CHECK_FALSE(r.report.connected);
}

TEST_CASE("detector configuration validation") {
    DetectorConfig cfg;
    cfg.max_passes = 0;
    CHECK_THROWS(detect(testutil::clique(3), cfg));
    cfg = {};
    cfg.min_gain = -1.0;
    CHECK_THROWS(detect(testutil::clique(3), cfg));
    cfg = {};
    cfg.init = DetectorConfig::Init::given;
    CHECK_THROWS(detect(testutil::clique(3), cfg));  // missing partition
}

TEST_CASE("rand_index") {
    const Partition a = testutil::split_at(4, 2);
    CHECK(rand_index(a, a) == 1.0);
    CHECK_THAT(rand_index(a, Partition::single_cluster(4)), WithinAbs(2.0 / 6.0, 1e-12));
    CHECK_THROWS(rand_index(a, Partition::single_cluster(5)));
}
