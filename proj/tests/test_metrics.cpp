#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "moddens/analytic.hpp"
#include "moddens/generators.hpp"
#include "moddens/metrics.hpp"

using namespace moddens;
using Catch::Matchers::WithinAbs;

TEST_CASE("modularity density of reference partitions") {
    CHECK_THAT(modularity_density_sum(testutil::clique(3), Partition::single_cluster(3)).value,
               WithinAbs(2.0, 1e-12));
    const Graph g = testutil::two_k3_bridge();
    CHECK_THAT(modularity_density_sum(g, testutil::split_at(6, 3)).value,
               WithinAbs(10.0 / 3.0, 1e-12));
    CHECK_THAT(modularity_density_sum(g, Partition::single_cluster(6)).value,
               WithinAbs(7.0 / 3.0, 1e-12));
}

TEST_CASE("all-singleton partitions only pay separation") {
    const Graph edge(2, {{0, 1, 1.0}});
    CHECK_THAT(modularity_density_sum(edge, Partition::singletons(2)).value,
               WithinAbs(-2.0, 1e-12));
    CHECK_THAT(modularity_density_tensor(edge, Partition::singletons(2)),
               WithinAbs(-2.0, 1e-12));
    CHECK(modularity_density_sum(testutil::clique(4), Partition::singletons(4)).value < 0.0);
}

TEST_CASE("tensor form matches the summation form") {
    const Graph g = testutil::two_k3_bridge();
    CHECK_THAT(modularity_density_tensor(g, testutil::split_at(6, 3)),
               WithinAbs(10.0 / 3.0, 1e-12));
    CHECK_THAT(modularity_density_tensor(testutil::clique(4), Partition::single_cluster(4)),
               WithinAbs(3.0, 1e-12));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(seed);
        const int nodes = 4 + static_cast<int>(rng() % 60);
        const long long max_edges = static_cast<long long>(nodes) * (nodes - 1) / 2;
        const long long edges = std::min<long long>(
            max_edges, nodes - 1 + static_cast<long long>(rng() % (3 * nodes)));
        const Graph random = gen_random_connected(nodes, edges, rng(), true);
        const Partition p = gen_random_partition(
            random.node_count(), 1 + static_cast<ClusterId>(rng() % nodes), rng());
        const double sum = modularity_density_sum(random, p).value;
        const double tensor = modularity_density_tensor(random, p);
        CHECK(std::abs(sum - tensor) <= 1e-9 * std::max(1.0, std::abs(sum)));
    }
}

TEST_CASE("per-cluster decomposition") {
    const MetricReport r =
        modularity_density_sum(testutil::two_k3_bridge(), testutil::split_at(6, 3));
    double total = 0.0;
    for (const auto& s : r.per_cluster) {
        CHECK_THAT(s.value, WithinAbs(s.cohesion - s.separation, 1e-12));
        CHECK(s.cohesion >= 0.0);
        CHECK(s.separation >= 0.0);
        total += s.value;
    }
    CHECK_THAT(total, WithinAbs(r.value, 1e-9));
    CHECK_THAT(r.per_cluster[0].cohesion, WithinAbs(2.0, 1e-12));
    CHECK_THAT(r.per_cluster[0].separation, WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("singleton clusters have zero cohesion and finite separation") {
    const Graph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    const MetricReport r = modularity_density_sum(star, Partition::singletons(4));
    for (const auto& s : r.per_cluster) {
        CHECK(s.cohesion == 0.0);
        CHECK(std::isfinite(s.separation));
    }
}

TEST_CASE("disconnected graphs are flagged but still evaluated") {
    const Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const MetricReport r = modularity_density_sum(g, testutil::split_at(4, 2));
    CHECK_FALSE(r.connected);
    CHECK_THAT(r.value, WithinAbs(2.0, 1e-12));
}

TEST_CASE("normalized degree vector") {
    SECTION("clique") {
        const std::vector<double> d =
            normalized_degree_vector(testutil::clique(3), Partition::single_cluster(3), 0);
        for (const double x : d) CHECK_THAT(x, WithinAbs(2.0 / std::sqrt(3.0), 1e-12));
    }
    SECTION("single edge, one side") {
        const Graph edge(2, {{0, 1, 1.0}});
        const std::vector<double> d =
            normalized_degree_vector(edge, Partition::singletons(2), 0);
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 1.0);
    }
    SECTION("cohesion equals mean internal degree") {
        const Graph g = testutil::two_k3_bridge();
        const Partition p = testutil::split_at(6, 3);
        const ClusterStats stats = cluster_stats(g, p);
        for (ClusterId c = 0; c < p.cluster_count(); ++c) {
            const std::vector<double> d = normalized_degree_vector(g, p, c);
            double dot = 0.0;
            const double root = std::sqrt(static_cast<double>(p.cluster_size(c)));
            for (const NodeId v : p.members(c)) dot += d[static_cast<std::size_t>(v)] / root;
            CHECK_THAT(dot, WithinAbs(stats.internal[static_cast<std::size_t>(c)] /
                                          p.cluster_size(c),
                                      1e-12));
        }
    }
    SECTION("unknown cluster id") {
        CHECK_THROWS(normalized_degree_vector(testutil::clique(3),
                                              Partition::single_cluster(3), 2));
    }
}

TEST_CASE("Li et al. modularity density") {
    const Graph g = testutil::two_k3_bridge();
    CHECK_THAT(li_modularity_density(g, testutil::split_at(6, 3)).value,
               WithinAbs(10.0 / 3.0, 1e-12));
    CHECK_THAT(li_modularity_density(g, Partition::single_cluster(6)).value,
               WithinAbs(7.0 / 3.0, 1e-12));
    // Whole graph in one cluster: D = 2W/|V|.
    CHECK_THAT(li_modularity_density(g, Partition::single_cluster(6)).value,
               WithinAbs(2.0 * g.total_weight() / g.node_count(), 1e-12));
}

TEST_CASE("limiting bridge totals") {
    CHECK_THAT(w_threshold_M(3, 3), WithinAbs(2.0, 1e-12));
    CHECK_THAT(w_threshold_D(3, 3), WithinAbs(2.0, 1e-12));
    CHECK(w_threshold_M(3, 12) > w_threshold_D(3, 12));
    CHECK_THROWS(w_threshold_M(2, 5));
    CHECK_THROWS(w_threshold_D(5, 2));

    for (int m = 3; m <= 50; ++m) {
        for (int n = 3; n <= 50; ++n) {
            const ThresholdResult t = threshold_result(m, n);
            CHECK(t.w_m >= t.w_d - 1e-12);
            if (m == n) {
                CHECK(std::abs(t.ratio_minus_one) <= 1e-12);
            } else {
                CHECK(t.ratio_minus_one > 0.0);
            }
        }
    }
}

TEST_CASE("ratio surface grows with heterogeneity at fixed total size") {
    for (const int total : {10, 20, 53}) {
        double prev = -1.0;
        for (int m = total / 2; m >= 3 && total - m <= 50; --m) {
            const double r = threshold_result(m, total - m).ratio_minus_one;
            CHECK(r >= prev - 1e-12);
            prev = r;
        }
    }
}

TEST_CASE("analytic suite closed forms") {
    SECTION("two bridged communities, m=n=3, p=1") {
        const AnalyticTable t = analytic_suite(
            {Family::two_communities_bridged, {3, 3}, {1.0, 1.0}, 0, 0});
        REQUIRE(t.size() == 3);
        CHECK_THAT(t[0].second, WithinAbs(7.0 / 3.0, 1e-12));   // M_single
        CHECK_THAT(t[1].second, WithinAbs(10.0 / 3.0, 1e-12));  // M_sep
        CHECK_THAT(t[2].second, WithinAbs(1.0, 1e-12));         // delta_M
    }
    SECTION("ring of three K3 cliques") {
        const AnalyticTable t = analytic_suite(
            {Family::ring_of_communities, {3, 3, 3}, {1.0, 1.0, 1.0}, 0, 0});
        CHECK(t[0].first == "M_sep");
        CHECK_THAT(t[0].second, WithinAbs(4.0, 1e-12));
    }
    SECTION("random community at p_min") {
        const AnalyticTable t =
            analytic_suite({Family::er_single, {5}, {0.5}, 0, 0});
        CHECK_THAT(t[0].second, WithinAbs(0.5, 1e-12));  // p_min
        CHECK_THAT(t[1].second, WithinAbs(2.0, 1e-12));  // expected M_single
    }
    SECTION("parameter validation") {
        CHECK_THROWS(analytic_suite({Family::er_single, {2}, {1.0}, 0, 0}));
        CHECK_THROWS(analytic_suite({Family::er_single, {5}, {0.4}, 0, 0}));
    }
}

TEST_CASE("clique instances match the analytic suite exactly") {
    const GeneratorSpec spec{Family::ring_of_communities, {3, 4, 5, 6},
                             std::vector<double>(4, 1.0), 0, 3};
    const LabeledGraph inst = generate(spec);
    const AnalyticTable t = analytic_suite(spec);
    CHECK_THAT(modularity_density_sum(inst.graph, inst.truth).value,
               WithinAbs(t[0].second, 1e-12));
    CHECK_THAT(modularity_density_sum(inst.graph,
                                      Partition::single_cluster(inst.graph.node_count()))
                   .value,
               WithinAbs(t.back().second, 1e-12));
}

TEST_CASE("random family matches the analytic suite in expectation") {
    // Conditioning on connectivity is negligible at this m and p.
    const int m = 10;
    const double p = 0.8;
    const int samples = 300;
    double mean = 0.0, sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Graph g = gen_er(m, p, static_cast<std::uint64_t>(s));
        const double value =
            modularity_density_sum(g, Partition::single_cluster(m)).value;
        mean += value;
        sq += value * value;
    }
    mean /= samples;
    const double stderr_mean =
        std::sqrt((sq / samples - mean * mean) / (samples - 1));
    const double expected =
        analytic_suite({Family::er_single, {m}, {p}, 0, 0})[1].second;
    CHECK(std::abs(mean - expected) <= 4.0 * stderr_mean + 1e-6);
}
