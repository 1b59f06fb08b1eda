#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace moddens {

using NodeId = std::int32_t;
using ClusterId = std::int32_t;
using Weight = double;

constexpr double kTolerance = 1e-9;

struct Edge {
    NodeId u;
    NodeId v;
    Weight weight;
};

/// Undirected weighted graph with dense 0-based node ids.
/// Immutable after construction; adjacency supports O(degree) neighbor scans.
class Graph {
public:
    Graph(NodeId node_count, std::vector<Edge> edges)
        : node_count_(node_count), edges_(std::move(edges)) {
        if (node_count_ <= 0) {
            throw std::invalid_argument("graph must have at least one node");
        }
        adjacency_.resize(static_cast<std::size_t>(node_count_));
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(edges_.size() * 2);
        for (auto& e : edges_) {
            if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_) {
                throw std::invalid_argument("edge endpoint out of range");
            }
            if (e.u == e.v) {
                throw std::invalid_argument("self-loops are not allowed");
            }
            if (e.weight < 0.0) {
                throw std::invalid_argument("negative edge weight");
            }
            if (e.u > e.v) std::swap(e.u, e.v);
            const std::uint64_t key =
                (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint32_t>(e.v);
            if (!seen.insert(key).second) {
                throw std::invalid_argument("duplicate edge");
            }
            adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.weight});
            adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, e.weight});
            total_weight_ += e.weight;
        }
    }

    NodeId node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    Weight total_weight() const { return total_weight_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<std::pair<NodeId, Weight>>& neighbors(NodeId v) const {
        return adjacency_[static_cast<std::size_t>(v)];
    }

    Weight weighted_degree(NodeId v) const {
        Weight d = 0.0;
        for (const auto& [u, w] : neighbors(v)) d += w;
        return d;
    }

private:
    NodeId node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<NodeId, Weight>>> adjacency_;
    Weight total_weight_ = 0.0;
};

/// Non-overlapping assignment of every node to one of cluster_count non-empty
/// clusters. Cluster ids are compacted to 0..cluster_count-1, preserving the
/// numeric order of the input ids.
class Partition {
public:
    static Partition from_assignment(std::vector<ClusterId> raw, NodeId node_count) {
        if (static_cast<NodeId>(raw.size()) != node_count) {
            throw std::invalid_argument("partition must assign every node exactly once");
        }
        // Compact labels in order of first appearance: the canonical
        // restricted-growth form, so structurally equal partitions compare
        // equal regardless of incoming label values.
        std::unordered_map<ClusterId, ClusterId> remap;
        ClusterId next = 0;
        for (auto& c : raw) {
            const auto [it, fresh] = remap.try_emplace(c, next);
            if (fresh) ++next;
            c = it->second;
        }
        return Partition(std::move(raw), next);
    }

    static Partition singletons(NodeId node_count) {
        std::vector<ClusterId> a(static_cast<std::size_t>(node_count));
        for (NodeId i = 0; i < node_count; ++i) a[static_cast<std::size_t>(i)] = i;
        return Partition(std::move(a), node_count);
    }

    static Partition single_cluster(NodeId node_count) {
        return Partition(std::vector<ClusterId>(static_cast<std::size_t>(node_count), 0), 1);
    }

    ClusterId cluster_of(NodeId v) const { return assignment_[static_cast<std::size_t>(v)]; }
    ClusterId cluster_count() const { return cluster_count_; }
    NodeId node_count() const { return static_cast<NodeId>(assignment_.size()); }
    NodeId cluster_size(ClusterId c) const { return sizes_[static_cast<std::size_t>(c)]; }
    const std::vector<ClusterId>& assignment() const { return assignment_; }
    const std::vector<NodeId>& members(ClusterId c) const {
        return members_[static_cast<std::size_t>(c)];
    }

    bool operator==(const Partition& other) const = default;

private:
    Partition(std::vector<ClusterId> assignment, ClusterId cluster_count)
        : assignment_(std::move(assignment)), cluster_count_(cluster_count) {
        sizes_.assign(static_cast<std::size_t>(cluster_count_), 0);
        members_.resize(static_cast<std::size_t>(cluster_count_));
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            const ClusterId c = assignment_[i];
            if (c < 0 || c >= cluster_count_) {
                throw std::invalid_argument("cluster id out of range");
            }
            ++sizes_[static_cast<std::size_t>(c)];
            members_[static_cast<std::size_t>(c)].push_back(static_cast<NodeId>(i));
        }
        for (const NodeId s : sizes_) {
            if (s == 0) throw std::invalid_argument("empty cluster");
        }
    }

    std::vector<ClusterId> assignment_;
    ClusterId cluster_count_ = 0;
    std::vector<NodeId> sizes_;
    std::vector<std::vector<NodeId>> members_;
};

/// Internal weight counts both orientations (2x each undirected internal
/// edge); boundary weight counts each cross edge once per unordered pair.
struct ClusterStats {
    std::vector<Weight> internal;                    // indexed by cluster id
    std::vector<std::tuple<ClusterId, ClusterId, Weight>> boundary;  // c < d

    Weight external(ClusterId c) const {
        Weight w = 0.0;
        for (const auto& [a, b, bw] : boundary) {
            if (a == c || b == c) w += bw;
        }
        return w;
    }
};

inline ClusterStats cluster_stats(const Graph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) {
        throw std::invalid_argument("partition does not match graph");
    }
    const std::size_t k = static_cast<std::size_t>(p.cluster_count());
    ClusterStats stats;
    stats.internal.assign(k, 0.0);

    // Bucket cross edges by their lower cluster id (counting sort), then
    // aggregate each bucket with a stamped scratch array: O(|E| + k) overall,
    // no hashing.
    std::vector<std::size_t> counts(k + 1, 0);
    for (const Edge& e : g.edges()) {
        const ClusterId a = p.cluster_of(e.u);
        const ClusterId b = p.cluster_of(e.v);
        if (a == b) {
            stats.internal[static_cast<std::size_t>(a)] += 2.0 * e.weight;
        } else {
            ++counts[static_cast<std::size_t>(std::min(a, b)) + 1];
        }
    }
    for (std::size_t c = 0; c < k; ++c) counts[c + 1] += counts[c];
    const std::size_t cross_total = counts[k];
    std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
    std::vector<ClusterId> partner(cross_total);
    std::vector<Weight> weight(cross_total);
    for (const Edge& e : g.edges()) {
        const ClusterId a = p.cluster_of(e.u);
        const ClusterId b = p.cluster_of(e.v);
        if (a == b) continue;
        const std::size_t slot = cursor[static_cast<std::size_t>(std::min(a, b))]++;
        partner[slot] = std::max(a, b);
        weight[slot] = e.weight;
    }
    std::vector<ClusterId> stamp(k, -1);
    std::vector<Weight> acc(k, 0.0);
    std::vector<ClusterId> group;
    for (std::size_t a = 0; a < k; ++a) {
        group.clear();
        for (std::size_t i = counts[a]; i < counts[a + 1]; ++i) {
            const ClusterId b = partner[i];
            if (stamp[static_cast<std::size_t>(b)] != static_cast<ClusterId>(a)) {
                stamp[static_cast<std::size_t>(b)] = static_cast<ClusterId>(a);
                acc[static_cast<std::size_t>(b)] = weight[i];
                group.push_back(b);
            } else {
                acc[static_cast<std::size_t>(b)] += weight[i];
            }
        }
        std::sort(group.begin(), group.end());
        for (const ClusterId b : group) {
            stats.boundary.emplace_back(static_cast<ClusterId>(a), b,
                                        acc[static_cast<std::size_t>(b)]);
        }
    }
    return stats;
}

inline bool is_connected(const Graph& g) {
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    NodeId reached = 1;
    while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        for (const auto& [u, w] : g.neighbors(v)) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                q.push(u);
            }
        }
    }
    return reached == g.node_count();
}

// ---------------------------------------------------------------------------
// File I/O.  Edge list: "u v" or "u v w" per line, '#' comments.  Partition
// file: "node cluster-id" per line.  Node ids are compacted to a dense range;
// the loader reports the dense -> original mapping.

struct LoadedGraph {
    Graph graph;
    std::vector<long long> original_labels;  // dense id -> label in the file
};

namespace detail {

inline bool blank_or_comment(const std::string& line) {
    for (const char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

[[noreturn]] inline void parse_error(const std::string& path, int line_no,
                                     const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

inline LoadedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    struct RawEdge {
        long long u, v;
        Weight w;
        int line;
    };
    std::vector<RawEdge> raw;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ss(line);
        long long u, v;
        double w = 1.0;
        if (!(ss >> u >> v)) detail::parse_error(path, line_no, "malformed line");
        if (!(ss >> w)) w = 1.0;
        std::string rest;
        if (ss.clear(), ss >> rest) detail::parse_error(path, line_no, "malformed line");
        if (u == v) detail::parse_error(path, line_no, "self-loop");
        if (w < 0.0) detail::parse_error(path, line_no, "negative weight");
        raw.push_back({u, v, w, line_no});
    }
    if (raw.empty()) throw std::runtime_error(path + ": empty edge list");

    std::vector<long long> labels;
    labels.reserve(raw.size() * 2);
    for (const auto& e : raw) {
        labels.push_back(e.u);
        labels.push_back(e.v);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::unordered_map<long long, NodeId> dense;
    dense.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        dense[labels[i]] = static_cast<NodeId>(i);
    }

    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw) {
        NodeId a = dense.at(e.u);
        NodeId b = dense.at(e.v);
        if (a > b) std::swap(a, b);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (!seen.insert(key).second) {
            detail::parse_error(path, e.line, "duplicate edge");
        }
        edges.push_back({a, b, e.w});
    }
    return LoadedGraph{Graph(static_cast<NodeId>(labels.size()), std::move(edges)),
                       std::move(labels)};
}

inline void save_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out.precision(17);
    for (const Edge& e : g.edges()) {
        out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
    }
}

inline Partition load_partition(const std::string& path, NodeId node_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open partition file: " + path);
    std::vector<ClusterId> assignment(static_cast<std::size_t>(node_count), -1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ss(line);
        long long node, cluster;
        if (!(ss >> node >> cluster)) detail::parse_error(path, line_no, "malformed line");
        if (node < 0 || node >= node_count) {
            detail::parse_error(path, line_no, "node id out of range");
        }
        if (assignment[static_cast<std::size_t>(node)] != -1) {
            detail::parse_error(path, line_no, "node assigned twice");
        }
        assignment[static_cast<std::size_t>(node)] = static_cast<ClusterId>(cluster);
    }
    for (NodeId v = 0; v < node_count; ++v) {
        if (assignment[static_cast<std::size_t>(v)] == -1) {
            throw std::runtime_error(path + ": node " + std::to_string(v) + " unassigned");
        }
    }
    return Partition::from_assignment(std::move(assignment), node_count);
}

inline void save_partition(const std::string& path, const Partition& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write partition file: " + path);
    for (NodeId v = 0; v < p.node_count(); ++v) {
        out << v << ' ' << p.cluster_of(v) << '\n';
    }
}

}  // namespace moddens
