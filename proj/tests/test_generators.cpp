#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "moddens/generators.hpp"
#include "moddens/metrics.hpp"

using namespace moddens;
using Catch::Matchers::WithinAbs;

namespace {

bool same_edges(const Graph& a, const Graph& b) {
    if (a.edge_count() != b.edge_count()) return false;
    for (std::size_t i = 0; i < a.edges().size(); ++i) {
        if (a.edges()[i].u != b.edges()[i].u || a.edges()[i].v != b.edges()[i].v ||
            a.edges()[i].weight != b.edges()[i].weight) {
            return false;
        }
    }
    return true;
}

bool induced_connected(const Graph& g, const Partition& p, ClusterId c) {
    const std::vector<NodeId>& nodes = p.members(c);
    std::set<NodeId> in(nodes.begin(), nodes.end());
    std::set<NodeId> seen{nodes.front()};
    std::vector<NodeId> stack{nodes.front()};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (const auto& [u, w] : g.neighbors(v)) {
            if (in.count(u) && !seen.count(u)) {
                seen.insert(u);
                stack.push_back(u);
            }
        }
    }
    return seen.size() == nodes.size();
}

}  // namespace

TEST_CASE("gen_er at p=1 is the clique") {
    const Graph g = gen_er(4, 1.0, 42);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 6);
}

TEST_CASE("gen_er rejects out-of-range parameters") {
    CHECK_THROWS(gen_er(2, 1.0, 0));
    CHECK_THROWS(gen_er(5, 0.4, 0));  // below p_min = 0.5
    CHECK_THROWS(gen_er(5, 1.1, 0));
}

TEST_CASE("gen_er at p_min yields connected graphs with enough edges") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Graph g = gen_er(5, 0.5, seed);
        CHECK(is_connected(g));
        CHECK(g.edge_count() >= 4);
    }
}

TEST_CASE("generators are deterministic in the seed") {
    const GeneratorSpec spec{Family::ring_of_communities, {3, 4, 5}, {1.0, 0.8, 0.6}, 0, 77};
    CHECK(same_edges(generate(spec).graph, generate(spec).graph));
    const GeneratorSpec other{Family::ring_of_communities, {3, 4, 5}, {1.0, 0.8, 0.6}, 0, 78};
    CHECK_FALSE(same_edges(generate(spec).graph, generate(other).graph));
}

TEST_CASE("gen_er edge count matches the binomial mean") {
    const int m = 10;
    const double p = 0.4;
    const int samples = 1000;
    double mean = 0.0, sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double e = static_cast<double>(gen_er(m, p, static_cast<std::uint64_t>(s)).edge_count());
        mean += e;
        sq += e * e;
    }
    mean /= samples;
    const double se = std::sqrt((sq / samples - mean * mean) / (samples - 1));
    CHECK(std::abs(mean - p * m * (m - 1) / 2.0) <= 4.0 * se + 0.05);
}

TEST_CASE("gen_two_communities") {
    const LabeledGraph inst = gen_two_communities(3, 3, 1.0, 1.0, 1);
    CHECK(inst.graph.edge_count() == 7);
    CHECK(inst.truth.cluster_count() == 2);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const LabeledGraph sample = gen_two_communities(4, 7, 0.8, 0.5, seed);
        CHECK(is_connected(sample.graph));
        for (ClusterId c = 0; c < sample.truth.cluster_count(); ++c) {
            CHECK(induced_connected(sample.graph, sample.truth, c));
        }
    }
}

TEST_CASE("split beats merge on a heterogeneous bridged pair") {
    const LabeledGraph inst = gen_two_communities(3, 9, 1.0, 1.0, 3);
    const double sep = modularity_density_sum(inst.graph, inst.truth).value;
    const double merged =
        modularity_density_sum(inst.graph, Partition::single_cluster(inst.graph.node_count()))
            .value;
    CHECK(sep > merged);
}

TEST_CASE("gen_ring") {
    const LabeledGraph ring = gen_ring({3, 3, 3}, {1.0, 1.0, 1.0}, 9);
    CHECK(ring.graph.edge_count() == 12);  // 9 internal + 3 bridges
    CHECK(ring.truth.cluster_count() == 3);
    CHECK_THROWS(gen_ring({3, 3}, {1.0, 1.0}, 0));
    CHECK_THROWS(gen_ring({3, 3, 3}, {1.0, 1.0}, 0));

    const LabeledGraph big = gen_ring({3, 4, 5, 6}, {1.0, 1.0, 1.0, 1.0}, 11);
    CHECK(big.graph.edge_count() ==
          static_cast<std::size_t>(3 + 6 + 10 + 15 + 4));  // bridges = community count
}

TEST_CASE("gen_two_cliques_w") {
    SECTION("w=1 separates with margin exactly 1") {
        const LabeledGraph inst = gen_two_cliques_w(3, 3, 1, 4);
        const double sep = modularity_density_sum(inst.graph, inst.truth).value;
        const double merged = modularity_density_sum(
                                  inst.graph, Partition::single_cluster(6))
                                  .value;
        CHECK_THAT(sep - merged, WithinAbs(1.0, 1e-12));
    }
    SECTION("w at the limiting value ties exactly") {
        const LabeledGraph inst = gen_two_cliques_w(3, 3, 2, 4);
        const double sep = modularity_density_sum(inst.graph, inst.truth).value;
        const double merged = modularity_density_sum(
                                  inst.graph, Partition::single_cluster(6))
                                  .value;
        CHECK_THAT(sep - merged, WithinAbs(0.0, 1e-12));
    }
    SECTION("complete join prefers the merge") {
        const LabeledGraph inst = gen_two_cliques_w(3, 3, 9, 4);
        const double sep = modularity_density_sum(inst.graph, inst.truth).value;
        const double merged = modularity_density_sum(
                                  inst.graph, Partition::single_cluster(6))
                                  .value;
        CHECK(merged > sep);
    }
    SECTION("validation") {
        CHECK_THROWS(gen_two_cliques_w(3, 3, 10, 0));
        CHECK_THROWS(gen_two_cliques_w(2, 3, 1, 0));
    }
    SECTION("bridges are distinct") {
        const LabeledGraph inst = gen_two_cliques_w(4, 5, 20, 8);
        CHECK(inst.graph.edge_count() == 6 + 10 + 20);
    }
}

TEST_CASE("truth value is independent of bridge endpoints at p=1") {
    double reference = 0.0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const LabeledGraph inst = gen_two_communities(4, 6, 1.0, 1.0, seed);
        const double value = modularity_density_sum(inst.graph, inst.truth).value;
        if (seed == 0) {
            reference = value;
        } else {
            CHECK_THAT(value, WithinAbs(reference, 1e-12));
        }
    }
}

TEST_CASE("gen_random_connected honors node and edge counts") {
    const Graph g = gen_random_connected(100, 400, 5, true);
    CHECK(g.node_count() == 100);
    CHECK(g.edge_count() == 400);
    CHECK(is_connected(g));
    CHECK_THROWS(gen_random_connected(10, 5, 0));
    CHECK_THROWS(gen_random_connected(10, 100, 0));
}
