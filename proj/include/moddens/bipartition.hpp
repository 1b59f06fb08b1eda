#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "moddens/graph.hpp"
#include "moddens/metrics.hpp"

namespace moddens {

/// Proposed two-way split of one cluster; both sides non-empty and together
/// covering the cluster exactly.
struct BipartitionProposal {
    ClusterId cluster;
    std::vector<NodeId> side_a;
    std::vector<NodeId> side_b;
};

struct BipartitionEval {
    double delta_m = 0.0;
    double delta_I_c = 0.0;
    double alpha = 0.0;
    double beta = 0.0;  // non-negative penalty from the external clusters
    double lambda = 0.0;
    double fDf = 0.0;
    double fLf = 0.0;
    bool degenerate = false;  // edgeless induced subgraph; delta_m from direct path
    std::vector<std::pair<NodeId, double>> f;        // two-valued, unit, sum zero
    std::vector<std::pair<NodeId, double>> delta_n;  // support on the split cluster
};

namespace detail {

// side[v]: 0 outside the cluster, 1 side a, 2 side b.
inline std::vector<char> side_map(const Graph& g, const Partition& p,
                                  const BipartitionProposal& prop) {
    if (prop.cluster < 0 || prop.cluster >= p.cluster_count()) {
        throw std::invalid_argument("unknown cluster id");
    }
    if (prop.side_a.empty() || prop.side_b.empty()) {
        throw std::invalid_argument("both sides of a bipartition must be non-empty");
    }
    std::vector<char> side(static_cast<std::size_t>(g.node_count()), 0);
    auto place = [&](const std::vector<NodeId>& nodes, char tag) {
        for (const NodeId v : nodes) {
            if (v < 0 || v >= g.node_count() || p.cluster_of(v) != prop.cluster) {
                throw std::invalid_argument("proposal node outside the target cluster");
            }
            if (side[static_cast<std::size_t>(v)] != 0) {
                throw std::invalid_argument("proposal sides overlap");
            }
            side[static_cast<std::size_t>(v)] = tag;
        }
    };
    place(prop.side_a, 1);
    place(prop.side_b, 2);
    if (prop.side_a.size() + prop.side_b.size() !=
        static_cast<std::size_t>(p.cluster_size(prop.cluster))) {
        throw std::invalid_argument("proposal does not cover the cluster");
    }
    return side;
}

inline Partition apply_split(const Partition& p, const BipartitionProposal& prop) {
    std::vector<ClusterId> a = p.assignment();
    for (const NodeId v : prop.side_b) {
        a[static_cast<std::size_t>(v)] = p.cluster_count();
    }
    return Partition::from_assignment(std::move(a), p.node_count());
}

}  // namespace detail

/// Change in M from splitting the cluster, via two full metric evaluations.
inline double delta_m_direct(const Graph& g, const Partition& p,
                             const BipartitionProposal& prop) {
    detail::side_map(g, p, prop);  // validation only
    const double before = modularity_density_sum(g, p).value;
    const double after = modularity_density_sum(g, detail::apply_split(p, prop)).value;
    return after - before;
}

/// Same quantity from sparse ClusterStats updates; only terms touched by the
/// split are recomputed.  Must agree with delta_m_direct to 1e-9.
inline double delta_m_incremental(const Graph& g, const Partition& p,
                                  const BipartitionProposal& prop) {
    const std::vector<char> side = detail::side_map(g, p, prop);
    const double n_a = static_cast<double>(prop.side_a.size());
    const double n_b = static_cast<double>(prop.side_b.size());
    const double n_c = n_a + n_b;

    double int_a = 0.0, int_b = 0.0, cut_ab = 0.0;
    std::unordered_map<ClusterId, double> to_a, to_b;  // boundary to external clusters
    for (const Edge& e : g.edges()) {
        const char su = side[static_cast<std::size_t>(e.u)];
        const char sv = side[static_cast<std::size_t>(e.v)];
        if (su == 0 && sv == 0) continue;
        if (su != 0 && sv != 0) {
            if (su == sv) {
                (su == 1 ? int_a : int_b) += 2.0 * e.weight;
            } else {
                cut_ab += e.weight;
            }
        } else {
            const char inside = su != 0 ? su : sv;
            const NodeId out = su != 0 ? e.v : e.u;
            (inside == 1 ? to_a : to_b)[p.cluster_of(out)] += e.weight;
        }
    }
    const double int_c = int_a + int_b + 2.0 * cut_ab;
    double delta = int_a / n_a + int_b / n_b - int_c / n_c -
                   2.0 * cut_ab / std::sqrt(n_a * n_b);
    for (ClusterId e = 0; e < p.cluster_count(); ++e) {
        if (e == prop.cluster) continue;
        const auto ia = to_a.find(e);
        const auto ib = to_b.find(e);
        const double b_ae = ia == to_a.end() ? 0.0 : ia->second;
        const double b_be = ib == to_b.end() ? 0.0 : ib->second;
        if (b_ae == 0.0 && b_be == 0.0) continue;
        const double n_e = static_cast<double>(p.cluster_size(e));
        delta += 2.0 * (b_ae + b_be) / std::sqrt(n_c * n_e);
        delta -= 2.0 * b_ae / std::sqrt(n_a * n_e);
        delta -= 2.0 * b_be / std::sqrt(n_b * n_e);
    }
    return delta;
}

/// The Laplacian/penalty decomposition: delta_m = alpha - beta with
/// alpha = fDf * (1 - lambda) local to the cluster and beta the external
/// penalty.  Identical to the direct value whenever the induced subgraph has
/// at least one edge.
inline BipartitionEval delta_m_decomposed(const Graph& g, const Partition& p,
                                          const BipartitionProposal& prop) {
    const std::vector<char> side = detail::side_map(g, p, prop);
    const double n_a = static_cast<double>(prop.side_a.size());
    const double n_b = static_cast<double>(prop.side_b.size());
    const double n_c = n_a + n_b;
    const double f_a = std::sqrt(n_b / (n_c * n_a));
    const double f_b = -std::sqrt(n_a / (n_c * n_b));
    const double dn_a = 1.0 / std::sqrt(n_a) - 1.0 / std::sqrt(n_c);
    const double dn_b = 1.0 / std::sqrt(n_b) - 1.0 / std::sqrt(n_c);

    BipartitionEval eval;
    for (const NodeId v : prop.side_a) {
        eval.f.emplace_back(v, f_a);
        eval.delta_n.emplace_back(v, dn_a);
    }
    for (const NodeId v : prop.side_b) {
        eval.f.emplace_back(v, f_b);
        eval.delta_n.emplace_back(v, dn_b);
    }

    for (const Edge& e : g.edges()) {
        const char su = side[static_cast<std::size_t>(e.u)];
        const char sv = side[static_cast<std::size_t>(e.v)];
        if (su != 0 && sv != 0) {
            const double fu = su == 1 ? f_a : f_b;
            const double fv = sv == 1 ? f_a : f_b;
            eval.fDf += e.weight * (fu * fu + fv * fv);
            eval.fLf += e.weight * (fu - fv) * (fu - fv);
        } else if (su != 0 || sv != 0) {
            const char inside = su != 0 ? su : sv;
            const NodeId out = su != 0 ? e.v : e.u;
            const double dn = inside == 1 ? dn_a : dn_b;
            eval.beta += 2.0 * e.weight * dn /
                         std::sqrt(static_cast<double>(p.cluster_size(p.cluster_of(out))));
        }
    }
    eval.delta_I_c = eval.fDf - eval.fLf;
    if (eval.fDf == 0.0) {
        eval.degenerate = true;
        eval.lambda = std::numeric_limits<double>::quiet_NaN();
        eval.alpha = 0.0;
        eval.delta_m = delta_m_direct(g, p, prop);
        return eval;
    }
    eval.lambda = (1.0 + 2.0 * std::sqrt(n_a * n_b) / n_c) * eval.fLf / eval.fDf;
    eval.alpha = eval.fDf * (1.0 - eval.lambda);
    eval.delta_m = eval.alpha - eval.beta;
    return eval;
}

/// Residual of the cross-term identity na.T.nb = (2 sqrt(na nb)/nc) fLf.
inline double laplacian_identity_check(const Graph& g, const Partition& p,
                                       const BipartitionProposal& prop) {
    const std::vector<char> side = detail::side_map(g, p, prop);
    const double n_a = static_cast<double>(prop.side_a.size());
    const double n_b = static_cast<double>(prop.side_b.size());
    const double n_c = n_a + n_b;
    double cut = 0.0, fLf = 0.0;
    const double f_a = std::sqrt(n_b / (n_c * n_a));
    const double f_b = -std::sqrt(n_a / (n_c * n_b));
    for (const Edge& e : g.edges()) {
        const char su = side[static_cast<std::size_t>(e.u)];
        const char sv = side[static_cast<std::size_t>(e.v)];
        if (su == 0 || sv == 0) continue;
        if (su != sv) cut += e.weight;
        const double fu = su == 1 ? f_a : f_b;
        const double fv = sv == 1 ? f_a : f_b;
        fLf += e.weight * (fu - fv) * (fu - fv);
    }
    const double lhs = 2.0 * cut / std::sqrt(n_a * n_b);
    const double rhs = 2.0 * std::sqrt(n_a * n_b) / n_c * fLf;
    return std::abs(lhs - rhs);
}

/// Residual of x.L.x = 1/2 sum T_jk (x_j - x_k)^2 on the induced subgraph of
/// one cluster, for an arbitrary vector over that cluster's members.
inline double laplacian_quadratic_residual(const Graph& g, const Partition& p, ClusterId c,
                                           const std::vector<double>& x) {
    const std::vector<NodeId>& nodes = p.members(c);
    if (x.size() != nodes.size()) throw std::invalid_argument("vector length mismatch");
    std::unordered_map<NodeId, double> value;
    value.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) value[nodes[i]] = x[i];
    double via_matrices = 0.0;  // x.D.x - x.T.x over induced edges
    double via_differences = 0.0;
    for (const Edge& e : g.edges()) {
        const auto iu = value.find(e.u);
        const auto iv = value.find(e.v);
        if (iu == value.end() || iv == value.end()) continue;
        via_matrices += e.weight * (iu->second * iu->second + iv->second * iv->second) -
                        2.0 * e.weight * iu->second * iv->second;
        via_differences += e.weight * (iu->second - iv->second) * (iu->second - iv->second);
    }
    return std::abs(via_matrices - via_differences);
}

}  // namespace moddens
