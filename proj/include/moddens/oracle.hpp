#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "moddens/analytic.hpp"
#include "moddens/generators.hpp"
#include "moddens/graph.hpp"
#include "moddens/metrics.hpp"

namespace moddens {

struct OracleResult {
    std::vector<ClusterId> best_assignment;
    double best_value = 0.0;
    Metric metric = Metric::M;
    std::uint64_t partitions_evaluated = 0;
    std::vector<std::vector<ClusterId>> ties;  // co-optimal, canonical order, capped
    std::uint64_t tie_count = 0;               // includes the optimum itself

    Partition best_partition(NodeId node_count) const {
        return Partition::from_assignment(best_assignment, node_count);
    }
};

namespace detail {

/// Metric value straight from a restricted-growth assignment, without
/// building a Partition.  Scratch arrays sized for small oracle graphs.
class AssignmentEvaluator {
public:
    AssignmentEvaluator(const Graph& g, Metric metric, int max_clusters)
        : graph_(g), metric_(metric), max_clusters_(max_clusters) {
        sizes_.resize(static_cast<std::size_t>(max_clusters));
        internal_.resize(static_cast<std::size_t>(max_clusters));
        cross_.resize(static_cast<std::size_t>(max_clusters) * max_clusters);
    }

    double operator()(const std::vector<ClusterId>& a, int cluster_count) {
        std::fill(sizes_.begin(), sizes_.begin() + cluster_count, 0);
        std::fill(internal_.begin(), internal_.begin() + cluster_count, 0.0);
        std::fill(cross_.begin(), cross_.begin() + cluster_count * max_clusters_, 0.0);
        for (const ClusterId c : a) ++sizes_[static_cast<std::size_t>(c)];
        for (const Edge& e : graph_.edges()) {
            const ClusterId cu = a[static_cast<std::size_t>(e.u)];
            const ClusterId cv = a[static_cast<std::size_t>(e.v)];
            if (cu == cv) {
                internal_[static_cast<std::size_t>(cu)] += 2.0 * e.weight;
            } else {
                cross_[static_cast<std::size_t>(std::min(cu, cv)) * max_clusters_ +
                       std::max(cu, cv)] += e.weight;
            }
        }
        double value = 0.0;
        for (int c = 0; c < cluster_count; ++c) {
            value += internal_[static_cast<std::size_t>(c)] / sizes_[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < cluster_count; ++c) {
            for (int d = c + 1; d < cluster_count; ++d) {
                const double w = cross_[static_cast<std::size_t>(c) * max_clusters_ + d];
                if (w == 0.0) continue;
                if (metric_ == Metric::M) {
                    value -= 2.0 * w /
                             std::sqrt(static_cast<double>(sizes_[static_cast<std::size_t>(c)]) *
                                       sizes_[static_cast<std::size_t>(d)]);
                } else {
                    value -= w / sizes_[static_cast<std::size_t>(c)] +
                             w / sizes_[static_cast<std::size_t>(d)];
                }
            }
        }
        return value;
    }

private:
    const Graph& graph_;
    Metric metric_;
    int max_clusters_;
    std::vector<int> sizes_;
    std::vector<double> internal_;
    std::vector<double> cross_;
};

}  // namespace detail

/// Exact argmax over all set partitions, enumerated as restricted-growth
/// strings in lexicographic order.  Bell(12) is the soft ceiling.
inline OracleResult exhaustive_best(const Graph& g, Metric metric, int max_nodes = 12) {
    const int n = g.node_count();
    if (n > max_nodes) {
        throw std::invalid_argument("graph too large for exhaustive search (" +
                                    std::to_string(n) + " > " + std::to_string(max_nodes) +
                                    " nodes)");
    }
    constexpr std::size_t kMaxTies = 32;
    OracleResult result;
    result.metric = metric;

    std::vector<ClusterId> a(static_cast<std::size_t>(n), 0);
    std::vector<ClusterId> cap(static_cast<std::size_t>(n), 1);  // cap[i] = max(a[0..i-1])+1
    detail::AssignmentEvaluator evaluate(g, metric, n);
    bool first = true;
    while (true) {
        const int clusters = (n == 1) ? 1 : std::max(cap[static_cast<std::size_t>(n - 1)],
                                                     static_cast<ClusterId>(
                                                         a[static_cast<std::size_t>(n - 1)] + 1));
        const double value = evaluate(a, clusters);
        ++result.partitions_evaluated;
        if (first || value > result.best_value + kTolerance) {
            result.best_value = value;
            result.best_assignment = a;
            result.ties.clear();
            result.ties.push_back(a);
            result.tie_count = 1;
            first = false;
        } else if (value >= result.best_value - kTolerance) {
            ++result.tie_count;
            if (result.ties.size() < kMaxTies) result.ties.push_back(a);
        }
        // Advance to the next restricted-growth string.
        int i = n - 1;
        while (i > 0 && a[static_cast<std::size_t>(i)] >= cap[static_cast<std::size_t>(i)]) {
            --i;
        }
        if (i == 0) break;
        ++a[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            a[static_cast<std::size_t>(j)] = 0;
            cap[static_cast<std::size_t>(j)] =
                std::max(cap[static_cast<std::size_t>(j - 1)],
                         static_cast<ClusterId>(a[static_cast<std::size_t>(j - 1)] + 1));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Structural-claim checks over the synthetic families.

enum class Claim { no_split, sep_beats_merge, sep_beats_merge_k, threshold_w };

inline std::string claim_name(Claim c) {
    switch (c) {
        case Claim::no_split: return "no_split";
        case Claim::sep_beats_merge: return "sep_beats_merge";
        case Claim::sep_beats_merge_k: return "sep_beats_merge_k";
        case Claim::threshold_w: return "threshold_w";
    }
    return "?";
}

struct InequalityReport {
    Claim claim;
    bool pass = true;
    double margin = 0.0;  // smallest winning margin observed
    std::vector<std::string> details;
};

namespace detail {

inline Partition merge_clusters(const Partition& truth,
                                const std::vector<ClusterId>& group_of) {
    std::vector<ClusterId> a(static_cast<std::size_t>(truth.node_count()));
    for (NodeId v = 0; v < truth.node_count(); ++v) {
        a[static_cast<std::size_t>(v)] =
            group_of[static_cast<std::size_t>(truth.cluster_of(v))];
    }
    return Partition::from_assignment(std::move(a), truth.node_count());
}

}  // namespace detail

inline InequalityReport verify_inequality(const GeneratorSpec& spec, Claim claim) {
    InequalityReport report;
    report.claim = claim;
    report.margin = std::numeric_limits<double>::infinity();
    auto record = [&](bool ok, double margin, const std::string& what) {
        report.margin = std::min(report.margin, margin);
        if (!ok) {
            report.pass = false;
            report.details.push_back("FAIL " + what);
        }
    };
    switch (claim) {
        case Claim::no_split: {
            const LabeledGraph inst = generate(spec);
            const OracleResult best = exhaustive_best(inst.graph, Metric::M);
            const bool single =
                best.best_partition(inst.graph.node_count()).cluster_count() == 1;
            record(single && best.tie_count == 1,
                   best.best_value -
                       evaluate_metric(inst.graph,
                                       Partition::singletons(inst.graph.node_count()),
                                       Metric::M),
                   "oracle argmax is not the single cluster");
            break;
        }
        case Claim::sep_beats_merge: {
            const LabeledGraph inst = generate(spec);
            const double sep = evaluate_metric(inst.graph, inst.truth, Metric::M);
            const double merged = evaluate_metric(
                inst.graph, Partition::single_cluster(inst.graph.node_count()), Metric::M);
            record(sep > merged, sep - merged, "M_sep <= M_single");
            break;
        }
        case Claim::sep_beats_merge_k: {
            const LabeledGraph inst = generate(spec);
            const double sep = evaluate_metric(inst.graph, inst.truth, Metric::M);
            const ClusterId count = inst.truth.cluster_count();
            // Merge every consecutive run of k+1 communities, all rotations.
            for (ClusterId k = 1; k < count; ++k) {
                for (ClusterId start = 0; start < count; ++start) {
                    std::vector<ClusterId> group(static_cast<std::size_t>(count));
                    for (ClusterId c = 0; c < count; ++c) group[static_cast<std::size_t>(c)] = c;
                    for (ClusterId j = 0; j <= k; ++j) {
                        group[static_cast<std::size_t>((start + j) % count)] = count;
                    }
                    const Partition merged = detail::merge_clusters(inst.truth, group);
                    const double value = evaluate_metric(inst.graph, merged, Metric::M);
                    record(sep > value, sep - value,
                           "M_sep <= M_merge^" + std::to_string(k) + " at rotation " +
                               std::to_string(start));
                    if (k == count - 1) break;  // all-merge is rotation independent
                }
            }
            break;
        }
        case Claim::threshold_w: {
            const int m = spec.sizes.at(0), n = spec.sizes.at(1);
            const double wm = w_threshold_M(m, n);
            for (int w = 0; w <= m * n; ++w) {
                GeneratorSpec point = spec;
                point.family = Family::two_cliques_w_bridge;
                point.bridge_count = w;
                const LabeledGraph inst = generate(point);
                const double sep = evaluate_metric(inst.graph, inst.truth, Metric::M);
                const double merged = evaluate_metric(
                    inst.graph, Partition::single_cluster(inst.graph.node_count()),
                    Metric::M);
                const bool split_wins = sep - merged > 1e-12;
                const bool below = w < wm - 1e-12;
                record(split_wins == below, std::abs(sep - merged),
                       "split/merge outcome disagrees with w_M at w=" + std::to_string(w));
            }
            break;
        }
    }
    if (report.pass && report.details.empty()) {
        report.details.push_back("ok, min margin " + std::to_string(report.margin));
    }
    return report;
}

}  // namespace moddens
