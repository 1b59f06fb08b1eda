#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "moddens/graph.hpp"

namespace moddens {

/// Generators draw from mt19937_64 through the helpers below, so identical
/// specs give bit-identical graphs on any conforming standard library.
inline constexpr const char* kPrngName = "mt19937_64";

enum class Family {
    er_single,
    two_communities_bridged,
    ring_of_communities,
    two_cliques_w_bridge,
};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::er_single: return "er_single";
        case Family::two_communities_bridged: return "two_communities_bridged";
        case Family::ring_of_communities: return "ring_of_communities";
        case Family::two_cliques_w_bridge: return "two_cliques_w_bridge";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    if (s == "er_single") return Family::er_single;
    if (s == "two_communities_bridged") return Family::two_communities_bridged;
    if (s == "ring_of_communities") return Family::ring_of_communities;
    if (s == "two_cliques_w_bridge") return Family::two_cliques_w_bridge;
    throw std::invalid_argument("unknown family: " + s);
}

struct GeneratorSpec {
    Family family;
    std::vector<int> sizes;
    std::vector<double> probs;
    int bridge_count = 1;  // two_cliques_w_bridge only
    std::uint64_t seed = 0;
};

struct LabeledGraph {
    Graph graph;
    Partition truth;
};

inline double min_edge_probability(int m) { return 2.0 / (m - 1); }

namespace detail {

// Rejection-sampled bounds keep draws reproducible across platforms
// (std::uniform_int_distribution is implementation-defined).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    return (rng() >> 11) * 0x1.0p-53 < p;
}

inline void check_community(int m, double p) {
    if (m < 3) throw std::invalid_argument("community size must be >= 3");
    if (p < min_edge_probability(m) - 1e-12 || p > 1.0 + 1e-12) {
        throw std::invalid_argument("edge probability outside [2/(m-1), 1]");
    }
}

// One ER community over nodes [offset, offset+m); appends to `edges`.
inline void er_block(std::vector<Edge>& edges, int offset, int m, double p,
                     std::mt19937_64& rng) {
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (bernoulli(rng, p)) {
                edges.push_back({static_cast<NodeId>(offset + i),
                                 static_cast<NodeId>(offset + j), 1.0});
            }
        }
    }
}

inline bool block_connected(const std::vector<Edge>& edges, int offset, int m) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
    for (const Edge& e : edges) {
        if (e.u >= offset && e.u < offset + m && e.v >= offset && e.v < offset + m) {
            adj[static_cast<std::size_t>(e.u - offset)].push_back(e.v - offset);
            adj[static_cast<std::size_t>(e.v - offset)].push_back(e.u - offset);
        }
    }
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const int u : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == m;
}

// Rejection sampling until the community is connected; hard error when the
// retry budget runs out rather than silently degrading.
inline void connected_er_block(std::vector<Edge>& edges, int offset, int m, double p,
                               std::mt19937_64& rng) {
    constexpr int kRetryBudget = 10000;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        const std::size_t mark = edges.size();
        er_block(edges, offset, m, p, rng);
        std::vector<Edge> block(edges.begin() + static_cast<std::ptrdiff_t>(mark),
                                edges.end());
        if (block_connected(block, offset, m)) return;
        edges.resize(mark);
    }
    throw std::runtime_error("could not generate a connected community in 10000 tries");
}

}  // namespace detail

/// Erdos-Renyi G(m, p) restricted to connected samples.
inline Graph gen_er(int m, double p, std::uint64_t seed) {
    detail::check_community(m, p);
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    detail::connected_er_block(edges, 0, m, p, rng);
    return Graph(static_cast<NodeId>(m), std::move(edges));
}

/// Two ER communities joined by exactly one unit bridge edge.
inline LabeledGraph gen_two_communities(int m, int n, double p_m, double p_n,
                                        std::uint64_t seed) {
    detail::check_community(m, p_m);
    detail::check_community(n, p_n);
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    detail::connected_er_block(edges, 0, m, p_m, rng);
    detail::connected_er_block(edges, m, n, p_n, rng);
    const NodeId a = static_cast<NodeId>(detail::uniform_below(rng, static_cast<std::uint64_t>(m)));
    const NodeId b = static_cast<NodeId>(
        m + detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
    edges.push_back({a, b, 1.0});
    std::vector<ClusterId> truth(static_cast<std::size_t>(m + n), 0);
    for (int i = m; i < m + n; ++i) truth[static_cast<std::size_t>(i)] = 1;
    return LabeledGraph{Graph(static_cast<NodeId>(m + n), std::move(edges)),
                        Partition::from_assignment(std::move(truth),
                                                   static_cast<NodeId>(m + n))};
}

/// Ring of >= 3 ER communities; one bridge between each pair of consecutive
/// communities plus the edge closing the ring.
inline LabeledGraph gen_ring(const std::vector<int>& sizes, const std::vector<double>& probs,
                             std::uint64_t seed) {
    if (sizes.size() < 3) throw std::invalid_argument("ring needs >= 3 communities");
    if (probs.size() != sizes.size()) {
        throw std::invalid_argument("need one edge probability per community");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        detail::check_community(sizes[i], probs[i]);
    }
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<int> offsets(sizes.size());
    int total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        offsets[i] = total;
        detail::connected_er_block(edges, total, sizes[i], probs[i], rng);
        total += sizes[i];
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const std::size_t j = (i + 1) % sizes.size();
        const NodeId a = static_cast<NodeId>(
            offsets[i] + detail::uniform_below(rng, static_cast<std::uint64_t>(sizes[i])));
        const NodeId b = static_cast<NodeId>(
            offsets[j] + detail::uniform_below(rng, static_cast<std::uint64_t>(sizes[j])));
        edges.push_back({a, b, 1.0});
    }
    std::vector<ClusterId> truth(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        for (int v = 0; v < sizes[i]; ++v) {
            truth[static_cast<std::size_t>(offsets[i] + v)] = static_cast<ClusterId>(i);
        }
    }
    return LabeledGraph{Graph(static_cast<NodeId>(total), std::move(edges)),
                        Partition::from_assignment(std::move(truth),
                                                   static_cast<NodeId>(total))};
}

/// K_m and K_n joined by w distinct unit bridge edges drawn uniformly without
/// replacement from the m*n cross pairs.
inline LabeledGraph gen_two_cliques_w(int m, int n, int w, std::uint64_t seed) {
    if (m < 3 || n < 3) throw std::invalid_argument("clique sizes must be >= 3");
    if (w < 0 || w > m * n) throw std::invalid_argument("bridge count outside [0, m*n]");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            edges.push_back({static_cast<NodeId>(m + i), static_cast<NodeId>(m + j), 1.0});
        }
    }
    // Partial Fisher-Yates over the cross-pair index space.
    std::vector<int> cross(static_cast<std::size_t>(m) * n);
    std::iota(cross.begin(), cross.end(), 0);
    for (int k = 0; k < w; ++k) {
        const std::size_t pick =
            k + detail::uniform_below(rng, static_cast<std::uint64_t>(cross.size() - k));
        std::swap(cross[static_cast<std::size_t>(k)], cross[pick]);
        const int idx = cross[static_cast<std::size_t>(k)];
        edges.push_back(
            {static_cast<NodeId>(idx / n), static_cast<NodeId>(m + idx % n), 1.0});
    }
    std::vector<ClusterId> truth(static_cast<std::size_t>(m + n), 0);
    for (int i = m; i < m + n; ++i) truth[static_cast<std::size_t>(i)] = 1;
    return LabeledGraph{Graph(static_cast<NodeId>(m + n), std::move(edges)),
                        Partition::from_assignment(std::move(truth),
                                                   static_cast<NodeId>(m + n))};
}

/// Connected sparse graph with an exact edge count: uniform random spanning
/// tree chain plus distinct random extra edges.  Weights are 1.0, or drawn
/// from (0, 2) when `weighted`.
inline Graph gen_random_connected(int nodes, long long edge_target, std::uint64_t seed,
                                  bool weighted = false) {
    if (nodes < 2) throw std::invalid_argument("need at least two nodes");
    const long long max_edges =
        static_cast<long long>(nodes) * (nodes - 1) / 2;
    if (edge_target < nodes - 1 || edge_target > max_edges) {
        throw std::invalid_argument("edge count outside [nodes-1, nodes*(nodes-1)/2]");
    }
    std::mt19937_64 rng(seed);
    auto weight = [&]() {
        return weighted ? 2.0 * ((rng() >> 11) * 0x1.0p-53) : 1.0;
    };
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(edge_target));
    // Random attachment tree keeps the graph connected by construction.
    for (int v = 1; v < nodes; ++v) {
        const NodeId u = static_cast<NodeId>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(v)));
        edges.push_back({u, static_cast<NodeId>(v), weight()});
        seen.insert((static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v));
    }
    while (static_cast<long long>(edges.size()) < edge_target) {
        NodeId a = static_cast<NodeId>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(nodes)));
        NodeId b = static_cast<NodeId>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(nodes)));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (!seen.insert(key).second) continue;
        edges.push_back({a, b, weight()});
    }
    return Graph(static_cast<NodeId>(nodes), std::move(edges));
}

/// Random partition with every cluster non-empty, for metric stress tests.
inline Partition gen_random_partition(NodeId nodes, ClusterId clusters, std::uint64_t seed) {
    if (clusters < 1 || clusters > nodes) throw std::invalid_argument("bad cluster count");
    std::mt19937_64 rng(seed);
    std::vector<ClusterId> a(static_cast<std::size_t>(nodes));
    for (ClusterId c = 0; c < clusters; ++c) a[static_cast<std::size_t>(c)] = c;
    for (NodeId v = clusters; v < nodes; ++v) {
        a[static_cast<std::size_t>(v)] = static_cast<ClusterId>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(clusters)));
    }
    for (std::size_t i = a.size(); i > 1; --i) {
        std::swap(a[i - 1], a[detail::uniform_below(rng, i)]);
    }
    return Partition::from_assignment(std::move(a), nodes);
}

inline LabeledGraph generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case Family::er_single: {
            if (spec.sizes.size() != 1 || spec.probs.size() != 1) {
                throw std::invalid_argument("er_single takes one size and one probability");
            }
            Graph g = gen_er(spec.sizes[0], spec.probs[0], spec.seed);
            const NodeId n = g.node_count();
            return LabeledGraph{std::move(g), Partition::single_cluster(n)};
        }
        case Family::two_communities_bridged:
            if (spec.sizes.size() != 2 || spec.probs.size() != 2) {
                throw std::invalid_argument(
                    "two_communities_bridged takes two sizes and two probabilities");
            }
            return gen_two_communities(spec.sizes[0], spec.sizes[1], spec.probs[0],
                                       spec.probs[1], spec.seed);
        case Family::ring_of_communities:
            return gen_ring(spec.sizes, spec.probs, spec.seed);
        case Family::two_cliques_w_bridge:
            if (spec.sizes.size() != 2) {
                throw std::invalid_argument("two_cliques_w_bridge takes two sizes");
            }
            return gen_two_cliques_w(spec.sizes[0], spec.sizes[1], spec.bridge_count,
                                     spec.seed);
    }
    throw std::invalid_argument("unknown family");
}

}  // namespace moddens
