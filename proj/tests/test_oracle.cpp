#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "moddens/generators.hpp"
#include "moddens/metrics.hpp"
#include "moddens/oracle.hpp"

using namespace moddens;
using Catch::Matchers::WithinAbs;

TEST_CASE("oracle finds the single cluster on K4") {
    const OracleResult r = exhaustive_best(testutil::clique(4), Metric::M);
    CHECK_THAT(r.best_value, WithinAbs(3.0, 1e-12));
    CHECK(r.best_partition(4).cluster_count() == 1);
    CHECK(r.tie_count == 1);
}

TEST_CASE("oracle recovers the natural split of two bridged K3s") {
    const OracleResult r = exhaustive_best(testutil::two_k3_bridge(), Metric::M);
    CHECK_THAT(r.best_value, WithinAbs(10.0 / 3.0, 1e-12));
    CHECK(r.best_partition(6) == testutil::split_at(6, 3));
    CHECK(r.tie_count == 1);
}

TEST_CASE("oracle recovers the three-way split of a K3 ring") {
    const LabeledGraph ring = gen_ring({3, 3, 3}, {1.0, 1.0, 1.0}, 2);
    const OracleResult r = exhaustive_best(ring.graph, Metric::M);
    CHECK_THAT(r.best_value, WithinAbs(4.0, 1e-12));
    CHECK(r.best_partition(ring.graph.node_count()) == ring.truth);
}

TEST_CASE("oracle visits exactly the Bell numbers of partitions") {
    CHECK(exhaustive_best(testutil::clique(3), Metric::M).partitions_evaluated == 5);
    CHECK(exhaustive_best(testutil::clique(4), Metric::M).partitions_evaluated == 15);
    CHECK(exhaustive_best(testutil::clique(5), Metric::M).partitions_evaluated == 52);
}

TEST_CASE("oracle refuses graphs above the node cap") {
    const Graph g = gen_random_connected(13, 20, 1);
    CHECK_THROWS(exhaustive_best(g, Metric::M));
    CHECK_NOTHROW(exhaustive_best(g, Metric::M, 13));
}

TEST_CASE("oracle optimum matches the tensor form") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = gen_random_connected(8, 12 + static_cast<long long>(seed), seed, true);
        const OracleResult r = exhaustive_best(g, Metric::M);
        CHECK_THAT(modularity_density_tensor(g, r.best_partition(8)),
                   WithinAbs(r.best_value, 1e-9));
    }
}

TEST_CASE("random connected communities never split") {
    for (int m = 4; m <= 8; ++m) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Graph g = gen_er(m, 1.0, seed);
            const OracleResult r = exhaustive_best(g, Metric::M);
            CHECK(r.best_partition(m).cluster_count() == 1);
        }
    }
}

TEST_CASE("oracle under the Li objective") {
    const OracleResult r = exhaustive_best(testutil::two_k3_bridge(), Metric::D);
    CHECK(r.metric == Metric::D);
    CHECK_THAT(r.best_value, WithinAbs(10.0 / 3.0, 1e-12));
    CHECK(r.best_partition(6) == testutil::split_at(6, 3));
}

TEST_CASE("verify_inequality structural claims") {
    SECTION("no_split on a clique") {
        const InequalityReport r = verify_inequality(
            {Family::er_single, {6}, {1.0}, 0, 5}, Claim::no_split);
        CHECK(r.pass);
    }
    SECTION("sep_beats_merge on bridged cliques") {
        const InequalityReport r = verify_inequality(
            {Family::two_communities_bridged, {3, 3}, {1.0, 1.0}, 0, 5},
            Claim::sep_beats_merge);
        CHECK(r.pass);
        CHECK_THAT(r.margin, WithinAbs(1.0, 1e-12));
    }
    SECTION("sep_beats_merge_k on a clique ring") {
        const InequalityReport r = verify_inequality(
            {Family::ring_of_communities, {3, 4, 5, 6}, {1.0, 1.0, 1.0, 1.0}, 0, 5},
            Claim::sep_beats_merge_k);
        CHECK(r.pass);
        CHECK(r.margin > 0.0);
    }
    SECTION("threshold_w sweep at m=n=3") {
        const InequalityReport r = verify_inequality(
            {Family::two_cliques_w_bridge, {3, 3}, {}, 0, 5}, Claim::threshold_w);
        CHECK(r.pass);
    }
    SECTION("threshold_w sweep at m=3, n=9") {
        const InequalityReport r = verify_inequality(
            {Family::two_cliques_w_bridge, {3, 9}, {}, 0, 5}, Claim::threshold_w);
        CHECK(r.pass);
    }
}
